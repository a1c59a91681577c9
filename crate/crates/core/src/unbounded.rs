//! A non-periodic integral positive SL_3 frieze with unbounded entries,
//! stacked from segments whose entries are closed forms in `w = 9 + √80`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{format_rational, parse_rational, ArithError, Integer, QuadNumber, Rational};
use crate::classify::{verify_slk, SlkReport};
use crate::pattern::{FriezePattern, PatternError};
use crate::printed::{parse_bands, parse_numeric, read_cells, PrintedCell, PrintedError};

pub const K: usize = 3;
pub const N: usize = 8;
/// Rows per segment.
pub const SEGMENT_ROWS: usize = 12;
pub const FORMULA_COUNT: usize = 76;

pub const CLOSED_FORMS: &str = include_str!("../data/closed_forms.tex");
pub const TEMPLATE: &str = include_str!("../data/segment_template.tex");
pub const Q0: &str = include_str!("../data/q0.tex");
pub const Q1: &str = include_str!("../data/q1.tex");

/// Constants missing from the printed closed forms (an empty term between
/// two `+` signs), as recovered by [`derive_missing_constants`].
pub const REPAIRED_CONSTANTS: [(usize, i64); 2] = [(30, 1), (62, 1)];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnboundedError {
    #[error("line {line}: {message}")]
    FormulaSyntax { line: usize, message: String },
    #[error("formula a_{index} is defined {count} times")]
    DuplicateFormula { index: usize, count: usize },
    #[error("formula a_{0} is missing")]
    MissingFormula(usize),
    #[error("formula a_{index} has an unfilled constant")]
    UnfilledConstant { index: usize },
    #[error("formula a_{index} at l = {ell} evaluates to {value}, not an integer")]
    NonIntegralValue { index: usize, ell: i64, value: String },
    #[error("formula index {0} out of range")]
    BadIndex(usize),
    #[error(transparent)]
    Printed(#[from] PrintedError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `coeff · w^{mult·ℓ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: QuadNumber,
    pub mult: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub terms: Vec<Term>,
    /// True when the printed form has an empty constant slot still unfilled.
    pub unfilled: bool,
}

impl Formula {
    pub fn eval(&self, ell: i64) -> Result<QuadNumber, ArithError> {
        let w = QuadNumber::w();
        let mut acc = QuadNumber::zero();
        for t in &self.terms {
            acc = acc + &t.coeff * &w.pow(t.mult * ell)?;
        }
        Ok(acc)
    }
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// `a w + b` with integer or rational `a`, `b`.
fn parse_linear(s: &str) -> Result<QuadNumber, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pieces = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if (c == '+' || c == '-') && i > 0 {
            pieces.push(&s[start..i]);
            start = i;
        }
    }
    pieces.push(&s[start..]);
    let mut acc = QuadNumber::zero();
    for p in pieces {
        let p = p.strip_prefix('+').unwrap_or(p);
        if let Some(c) = p.strip_suffix('w') {
            let c = match c {
                "" => Rational::from_integer(1.into()),
                "-" => Rational::from_integer((-1).into()),
                c => parse_rational(c).map_err(|e| e.to_string())?,
            };
            acc = acc + QuadNumber::w().scale(&c);
        } else {
            acc = acc + QuadNumber::from_rational(parse_rational(p).map_err(|e| e.to_string())?);
        }
    }
    Ok(acc)
}

fn parse_exponent(s: &str) -> Result<i64, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace() && *c != '{' && *c != '}').collect();
    let m = s.strip_suffix("\\ell").ok_or_else(|| format!("exponent {s:?} is not a multiple of l"))?;
    match m {
        "" => Ok(1),
        "-" => Ok(-1),
        m => m.parse().map_err(|_| format!("bad exponent {s:?}")),
    }
}

fn parse_term(s: &str) -> Result<Option<Term>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(None);
    }
    let Some(pos) = s.rfind("w^") else {
        let c = parse_rational(s).map_err(|e| e.to_string())?;
        return Ok(Some(Term { coeff: QuadNumber::from_rational(c), mult: 0 }));
    };
    let mult = parse_exponent(&s[pos + 2..])?;
    let prefix = s[..pos].trim();
    let coeff = if prefix.is_empty() {
        QuadNumber::one()
    } else {
        let open = prefix.find('(').ok_or_else(|| format!("bad coefficient {prefix:?}"))?;
        let inner = prefix[open..]
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| format!("unbalanced coefficient {prefix:?}"))?;
        let lin = parse_linear(inner)?;
        let scale = prefix[..open].trim();
        if scale.is_empty() {
            lin
        } else {
            lin.scale(&parse_rational(scale).map_err(|e| e.to_string())?)
        }
    };
    Ok(Some(Term { coeff, mult }))
}

/// Parses `a_{i}&=term+term+...` lines. Empty terms mark a missing
/// constant and set [`Formula::unfilled`].
pub fn parse_formulas(text: &str) -> Result<BTreeMap<usize, Formula>, UnboundedError> {
    let mut out = BTreeMap::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim().trim_end_matches("\\\\").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| UnboundedError::FormulaSyntax { line: ln + 1, message };
        let (lhs, rhs) = line.split_once("&=").ok_or_else(|| err("missing '&='".into()))?;
        let index: usize = lhs
            .trim()
            .strip_prefix("a_")
            .map(|s| s.trim_start_matches('{').trim_end_matches('}'))
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err(format!("bad left side {lhs:?}")))?;
        let mut terms = Vec::new();
        let mut unfilled = false;
        for t in split_top(rhs, '+') {
            match parse_term(t).map_err(err)? {
                Some(t) => terms.push(t),
                None => unfilled = true,
            }
        }
        if out.insert(index, Formula { terms, unfilled }).is_some() {
            return Err(UnboundedError::DuplicateFormula { index, count: 2 });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaTable {
    formulas: Vec<Formula>,
}

impl FormulaTable {
    /// Builds the table from parsed formulas, filling empty constant slots
    /// from `repairs`.
    pub fn new(mut parsed: BTreeMap<usize, Formula>, repairs: &[(usize, i64)]) -> Result<Self, UnboundedError> {
        for &(idx, c) in repairs {
            let f = parsed.get_mut(&idx).ok_or(UnboundedError::MissingFormula(idx))?;
            if f.unfilled {
                f.terms.push(Term { coeff: QuadNumber::from_int(c), mult: 0 });
                f.unfilled = false;
            }
        }
        let formulas = (1..=FORMULA_COUNT)
            .map(|i| {
                let f = parsed.remove(&i).ok_or(UnboundedError::MissingFormula(i))?;
                if f.unfilled {
                    Err(UnboundedError::UnfilledConstant { index: i })
                } else {
                    Ok(f)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some((&idx, _)) = parsed.iter().next() {
            return Err(UnboundedError::BadIndex(idx));
        }
        Ok(FormulaTable { formulas })
    }

    /// The shipped transcription with its two repaired constants.
    pub fn standard() -> Self {
        Self::new(parse_formulas(CLOSED_FORMS).expect("embedded formulas parse"), &REPAIRED_CONSTANTS)
            .expect("embedded formulas complete")
    }

    pub fn formula(&self, index: usize) -> Option<&Formula> {
        index.checked_sub(1).and_then(|i| self.formulas.get(i))
    }

    /// `a_index(ℓ)` as an integer.
    pub fn entry(&self, index: usize, ell: i64) -> Result<Integer, UnboundedError> {
        let f = self.formula(index).ok_or(UnboundedError::BadIndex(index))?;
        let v = f.eval(ell)?;
        v.as_integer().ok_or_else(|| UnboundedError::NonIntegralValue { index, ell, value: v.to_string() })
    }
}

/// `a_index(ℓ)` from the standard table.
pub fn entry_formula(index: usize, ell: i64) -> Result<Integer, UnboundedError> {
    FormulaTable::standard().entry(index, ell)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot {
    Fixed(BigInt),
    Formula(usize),
}

/// Band slots of the 12 rows of a segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentTemplate {
    rows: Vec<Vec<Slot>>,
}

impl SegmentTemplate {
    pub fn parse(text: &str) -> Result<Self, UnboundedError> {
        let bands = parse_bands(K, N, &read_cells(text)?)?;
        let rows = bands
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|c| match c {
                        PrintedCell::Int(v) => Slot::Fixed(v),
                        PrintedCell::Symbol(i) => Slot::Formula(i),
                    })
                    .collect()
            })
            .collect();
        Ok(SegmentTemplate { rows })
    }

    pub fn standard() -> Self {
        Self::parse(TEMPLATE).expect("embedded template parses")
    }

    pub fn rows(&self) -> &[Vec<Slot>] {
        &self.rows
    }

    /// Every `(row, column)` (0-based) holding formula `index`.
    pub fn slots_of(&self, index: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            for (c, s) in row.iter().enumerate() {
                if *s == Slot::Formula(index) {
                    out.push((r, c));
                }
            }
        }
        out
    }

    pub fn instantiate(&self, table: &FormulaTable, ell: i64) -> Result<Vec<Vec<Integer>>, UnboundedError> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| match s {
                        Slot::Fixed(v) => Ok(v.clone()),
                        Slot::Formula(i) => table.entry(*i, ell),
                    })
                    .collect()
            })
            .collect()
    }
}

/// The band rows of segment `ℓ`.
pub fn segment(ell: i64) -> Result<Vec<Vec<Integer>>, UnboundedError> {
    SegmentTemplate::standard().instantiate(&FormulaTable::standard(), ell)
}

/// The printed segments for ℓ = 0 and ℓ = 1.
pub fn printed_segment(ell: i64) -> Option<Vec<Vec<Integer>>> {
    let text = match ell {
        0 => Q0,
        1 => Q1,
        _ => return None,
    };
    let bands = parse_numeric(K, N, text).expect("embedded segment parses");
    Some(bands.into_iter().map(|r| r.into_iter().map(|v| v.to_integer()).collect()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairedConstant {
    pub index: usize,
    pub value: Rational,
    /// Whether the value also reproduces the ℓ = 1 segment.
    pub confirmed: bool,
}

/// Recovers each unfilled constant from the ℓ = 0 segment and checks it
/// against the ℓ = 1 segment.
pub fn derive_missing_constants(
    parsed: &BTreeMap<usize, Formula>,
    template: &SegmentTemplate,
    q0: &[Vec<Integer>],
    q1: &[Vec<Integer>],
) -> Result<Vec<RepairedConstant>, UnboundedError> {
    let mut out = Vec::new();
    for (&index, f) in parsed.iter().filter(|(_, f)| f.unfilled) {
        let &(r, c) = template.slots_of(index).first().ok_or(UnboundedError::MissingFormula(index))?;
        let radical0 = f.eval(0)?;
        let value = Rational::from_integer(q0[r][c].clone()) - &radical0.a;
        let at1 = f.eval(1)? + QuadNumber::from_rational(value.clone());
        let confirmed = radical0.b.is_zero() && at1.as_integer().is_some_and(|v| v == q1[r][c]);
        out.push(RepairedConstant { index, value, confirmed });
    }
    Ok(out)
}

pub fn t(ell: i64) -> Integer {
    FormulaTable::standard().entry(28, ell).expect("a_28 is integral")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcatenationReport {
    pub lo: i64,
    pub hi: i64,
    pub slk: SlkReport,
    pub integral: bool,
    pub positive: bool,
    /// Largest entry of each segment.
    pub max_entries: Vec<(i64, Integer)>,
}

impl ConcatenationReport {
    pub fn passed(&self) -> bool {
        self.slk.passed() && self.integral && self.positive
    }
}

/// Stacks segments `lo..=hi`; segment ℓ supplies rows `12ℓ+1 ..= 12ℓ+12`.
pub fn stacked(lo: i64, hi: i64) -> Result<FriezePattern, UnboundedError> {
    let template = SegmentTemplate::standard();
    let table = FormulaTable::standard();
    let mut rows = Vec::new();
    for ell in lo..=hi {
        for r in template.instantiate(&table, ell)? {
            rows.push(r.into_iter().map(Rational::from_integer).collect());
        }
    }
    Ok(FriezePattern::window_mode(K, N, SEGMENT_ROWS as i64 * lo + 1, rows)?)
}

pub fn verify_concatenation(lo: i64, hi: i64) -> Result<ConcatenationReport, UnboundedError> {
    let f = stacked(lo, hi)?;
    let slk = verify_slk(&f, None)?;
    let all = f.stored_rows().iter().flatten();
    let integral = all.clone().all(Rational::is_integer);
    let positive = all.clone().all(Rational::is_positive);
    let max_entries = f
        .stored_rows()
        .chunks(SEGMENT_ROWS)
        .zip(lo..=hi)
        .map(|(seg, ell)| {
            let m = seg.iter().flatten().max().cloned().unwrap_or_else(Rational::zero);
            (ell, m.to_integer())
        })
        .collect();
    Ok(ConcatenationReport { lo, hi, slk, integral, positive, max_entries })
}

impl std::fmt::Display for RepairedConstant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "a_{}: constant {} ({})",
            self.index,
            format_rational(&self.value),
            if self.confirmed { "confirmed" } else { "unconfirmed" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_terms() {
        let f = parse_formulas("a_{5}&=1/40(13w + 63)w^{-\\ell}+9+w^{2 \\ell}\\\\").unwrap();
        let f = &f[&5];
        assert_eq!(f.terms.len(), 3);
        assert_eq!(f.terms[0].mult, -1);
        assert_eq!(f.terms[1].coeff, QuadNumber::from_int(9));
        assert_eq!(f.terms[2], Term { coeff: QuadNumber::one(), mult: 2 });
        assert!(!f.unfilled);
        let g = parse_formulas("a_{1}&=w^{-\\ell}++w^\\ell").unwrap();
        assert!(g[&1].unfilled);
        assert!(parse_formulas("a_{1}=w").is_err());
        assert!(parse_formulas("a_{1}&=w^{x}").is_err());
    }

    #[test]
    fn table_shape() {
        let raw = parse_formulas(CLOSED_FORMS).unwrap();
        assert_eq!(raw.len(), FORMULA_COUNT);
        let unfilled: Vec<usize> = raw.iter().filter(|(_, f)| f.unfilled).map(|(&i, _)| i).collect();
        assert_eq!(unfilled, vec![30, 62]);
        assert_eq!(FormulaTable::new(raw, &[]), Err(UnboundedError::UnfilledConstant { index: 30 }));
    }

    #[test]
    fn known_values() {
        assert_eq!(entry_formula(1, 0).unwrap(), 9.into());
        assert_eq!(entry_formula(28, 1).unwrap(), 18.into());
        assert_eq!(entry_formula(28, 2).unwrap(), 322.into());
        assert!(matches!(entry_formula(77, 0), Err(UnboundedError::BadIndex(77))));
    }

    #[test]
    fn template_shape() {
        let t = SegmentTemplate::standard();
        assert_eq!(t.rows().len(), SEGMENT_ROWS);
        assert!(t.rows().iter().all(|r| r.len() == N));
        let mut seen: Vec<usize> =
            t.rows().iter().flatten().filter_map(|s| if let Slot::Formula(i) = s { Some(*i) } else { None }).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen, (1..=FORMULA_COUNT).collect::<Vec<_>>());
    }
}
