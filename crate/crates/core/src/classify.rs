//! The classification predicates, SL_k verification, Sylvester's identity,
//! the dual frieze and the positivity lemma check.

use std::fmt;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{format_rational, Rational};
use crate::pattern::{Array, FriezePattern, PatternError, Position, Vertical};

/// Windows of size `size` with top row `i` are checked at columns
/// `i-k ..= i+n+1`; by the glide symmetry these cover every distinct window.
fn column_range(f: &FriezePattern, i: i64) -> std::ops::RangeInclusive<i64> {
    let (k, n) = (f.k() as i64, f.n() as i64);
    i - k..=i + n + 1
}

/// Evaluates `pred` on every `size`-window in the checking set and returns
/// the failing positions with their minors, sorted by position.
fn scan_minors<P>(
    f: &FriezePattern,
    rows: (i64, i64),
    size: usize,
    pred: P,
) -> Result<Vec<(Position, Rational)>, PatternError>
where
    P: Fn(i64, &Rational) -> bool + Sync,
{
    let per_row: Vec<Result<Vec<(Position, Rational)>, PatternError>> = (rows.0..=rows.1)
        .into_par_iter()
        .map(|i| {
            let mut bad = Vec::new();
            for j in column_range(f, i) {
                let d = f.minor(i, j, size)?;
                if !pred(j - i, &d) {
                    bad.push((Position::new(i, j), d));
                }
            }
            Ok(bad)
        })
        .collect();
    let mut out = Vec::new();
    for r in per_row {
        out.extend(r?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlkReport {
    pub rows: (i64, i64),
    pub windows_checked: usize,
    /// Top-left positions of k×k windows whose determinant is not 1.
    pub failures: Vec<(Position, Rational)>,
}

impl SlkReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that every adjacent k×k minor with top row in `rows` equals 1.
/// Defaults to one vertical period (periodic) or every complete window of
/// the stored strip (window mode).
pub fn verify_slk(f: &FriezePattern, rows: Option<(i64, i64)>) -> Result<SlkReport, PatternError> {
    let k = f.k();
    let rows = match rows {
        Some(r) => r,
        None => match f.window_rows(k) {
            Some(r) => r,
            None => return Ok(SlkReport { rows: (1, 0), windows_checked: 0, failures: Vec::new() }),
        },
    };
    let one = Rational::from_integer(1.into());
    let failures = scan_minors(f, rows, k, |_, d| *d == one)?;
    let count = (rows.1 - rows.0 + 1).max(0) as usize * (f.n() + f.k() + 2);
    Ok(SlkReport { rows, windows_checked: count, failures })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Slk,
    Integral,
    Nonzero,
    Positive,
    Generic,
    Tame,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Slk => "slk",
            Property::Integral => "integral",
            Property::Nonzero => "nonzero",
            Property::Positive => "positive",
            Property::Generic => "generic",
            Property::Tame => "tame",
        }
    }
}

/// A failed property, the first offending position (sorted by `(i, j)`),
/// the minor size inspected there and the value found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub property: Property,
    pub position: Position,
    pub size: usize,
    pub value: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodInfo {
    /// Minimal vertical period.
    Found(usize),
    /// No period up to this bound (window mode only).
    NoneUpTo(usize),
}

impl PeriodInfo {
    pub fn period(self) -> Option<usize> {
        match self {
            PeriodInfo::Found(m) => Some(m),
            PeriodInfo::NoneUpTo(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub is_slk: bool,
    pub integral: bool,
    pub nonzero: bool,
    pub positive: bool,
    pub period: PeriodInfo,
    pub generic: bool,
    pub tame: bool,
    pub wild: bool,
    pub witnesses: Vec<Witness>,
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "slk:      {}", self.is_slk)?;
        writeln!(f, "integral: {}", self.integral)?;
        writeln!(f, "nonzero:  {}", self.nonzero)?;
        writeln!(f, "positive: {}", self.positive)?;
        match self.period {
            PeriodInfo::Found(m) => writeln!(f, "period:   {m}")?,
            PeriodInfo::NoneUpTo(b) => writeln!(f, "period:   none <= {b}")?,
        }
        writeln!(f, "generic:  {}", self.generic)?;
        writeln!(f, "tame:     {}", self.tame)?;
        writeln!(f, "wild:     {}", self.wild)?;
        for w in &self.witnesses {
            writeln!(
                f,
                "witness:  {} fails at {} (size {}): {}",
                w.property.name(),
                w.position,
                w.size,
                format_rational(&w.value)
            )?;
        }
        Ok(())
    }
}

/// Minimal vertical period of the band rows.
pub fn minimal_period(f: &FriezePattern) -> PeriodInfo {
    let rows = f.stored_rows();
    let len = rows.len();
    match f.vertical() {
        Vertical::Periodic(m) => {
            let d = (1..=m).filter(|d| m % d == 0).find(|&d| (0..m).all(|x| rows[x] == rows[(x + d) % m])).unwrap_or(m);
            PeriodInfo::Found(d)
        }
        Vertical::Window { .. } => {
            let bound = len / 2;
            (1..=bound)
                .find(|&d| (0..len - d).all(|x| rows[x] == rows[x + d]))
                .map_or(PeriodInfo::NoneUpTo(bound), PeriodInfo::Found)
        }
    }
}

/// Whether the row sequence repeats with period `d` over the stored rows.
pub fn has_period(f: &FriezePattern, d: usize) -> bool {
    let rows = f.stored_rows();
    match f.vertical() {
        Vertical::Periodic(m) => (0..m).all(|x| rows[x] == rows[(x + d) % m]),
        Vertical::Window { .. } => d < rows.len() && (0..rows.len() - d).all(|x| rows[x] == rows[x + d]),
    }
}

fn next_prime(mut x: u64) -> u64 {
    let is_prime = |v: u64| v >= 2 && (2..).take_while(|d| d * d <= v).all(|d| !v.is_multiple_of(d));
    while !is_prime(x) {
        x += 1;
    }
    x
}

/// For `(k-1)`-windows at column offset `j - i` in `-k ..= n+1`, whether the
/// minor vanishes identically in the band entries (forced by the border
/// zeros). Decided by evaluating at two independent draws of large random
/// primes: a nonzero polynomial vanishing at both is vanishingly unlikely.
pub fn structural_zero_offsets(k: usize, n: usize) -> Vec<bool> {
    let size = k - 1;
    let sample = |seed: u64| -> Vec<bool> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<Rational>> = (0..size)
            .map(|_| {
                (0..n)
                    .map(|_| Rational::from_integer(next_prime(rng.gen_range(1_000_000..1_000_000_000)).into()))
                    .collect()
            })
            .collect();
        let f = FriezePattern::window_mode(k, n, 0, rows).expect("well-shaped sample");
        (-(k as i64)..=n as i64 + 1).map(|d| f.minor(0, d, size).expect("rows present").is_zero()).collect()
    };
    let a = sample(0x5eed_0001 ^ (k as u64) << 32 ^ n as u64);
    let b = sample(0x5eed_0002 ^ (k as u64) << 32 ^ n as u64);
    a.into_iter().zip(b).map(|(x, y)| x && y).collect()
}

pub fn classify(f: &FriezePattern) -> Result<ClassificationReport, PatternError> {
    let (k, n) = (f.k(), f.n());
    let mut witnesses = Vec::new();

    let slk_failures = verify_slk(f, None)?.failures;
    let is_slk = slk_failures.is_empty();
    if let Some((p, v)) = slk_failures.into_iter().next() {
        witnesses.push(Witness { property: Property::Slk, position: p, size: k, value: v });
    }

    let (lo, hi) = f.row_span();
    let mut band_witness = |prop: Property, bad: &dyn Fn(&Rational) -> bool| -> bool {
        for i in lo..=hi {
            let band = f.band(i).expect("stored row");
            if let Some((r, v)) = band.iter().enumerate().find(|(_, v)| bad(v)) {
                witnesses.push(Witness {
                    property: prop,
                    position: Position::new(i, i + r as i64),
                    size: 1,
                    value: v.clone(),
                });
                return false;
            }
        }
        true
    };
    let integral = band_witness(Property::Integral, &|v| !v.is_integer());
    let nonzero = band_witness(Property::Nonzero, &|v| v.is_zero());
    let positive = band_witness(Property::Positive, &|v| !v.is_positive());

    let structural = structural_zero_offsets(k, n);
    let generic = match f.window_rows(k - 1) {
        Some(rows) => {
            let bad = scan_minors(f, rows, k - 1, |d, v| structural[(d + k as i64) as usize] || !v.is_zero())?;
            if let Some((p, v)) = bad.into_iter().next() {
                witnesses.push(Witness { property: Property::Generic, position: p, size: k - 1, value: v });
                false
            } else {
                true
            }
        }
        None => true,
    };

    let all_vanish = match f.window_rows(k + 1) {
        Some(rows) => {
            let bad = scan_minors(f, rows, k + 1, |_, v| v.is_zero())?;
            if let Some((p, v)) = bad.into_iter().next() {
                witnesses.push(Witness { property: Property::Tame, position: p, size: k + 1, value: v });
                false
            } else {
                true
            }
        }
        None => true,
    };
    let tame = is_slk && all_vanish;

    Ok(ClassificationReport {
        is_slk,
        integral,
        nonzero,
        positive,
        period: minimal_period(f),
        generic,
        tame,
        wild: !tame,
        witnesses,
    })
}

/// `D^{ℓ+1}_{i,j} D^{ℓ-1}_{i+1,j+1} − (D^ℓ_{i,j} D^ℓ_{i+1,j+1} − D^ℓ_{i+1,j} D^ℓ_{i,j+1})`,
/// identically zero for every array.
pub fn sylvester_residual<A: Array + ?Sized>(a: &A, i: i64, j: i64, size: usize) -> Result<Rational, PatternError> {
    if size == 0 {
        return Err(PatternError::SizeTooSmall(1));
    }
    let lhs = a.minor(i, j, size + 1)? * a.minor(i + 1, j + 1, size - 1)?;
    let rhs =
        a.minor(i, j, size)? * a.minor(i + 1, j + 1, size)? - a.minor(i + 1, j, size)? * a.minor(i, j + 1, size)?;
    Ok(lhs - rhs)
}

/// The `(k-1)`-minors over one period, `D^{k-1}_{i,j}` for `j` in the
/// checking range of row `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualArray {
    pub k: usize,
    pub n: usize,
    /// `(i, first j, values)` per row.
    pub rows: Vec<(i64, i64, Vec<Rational>)>,
}

impl DualArray {
    pub fn get(&self, i: i64, j: i64) -> Option<&Rational> {
        self.rows.iter().find(|(r, _, _)| *r == i).and_then(|(_, j0, vals)| vals.get(usize::try_from(j - j0).ok()?))
    }
}

pub fn dual(f: &FriezePattern) -> Result<DualArray, PatternError> {
    let size = f.k() - 1;
    let (lo, hi) = f.window_rows(size).ok_or(PatternError::RowOutOfRange(f.row_span().1 + 1))?;
    let rows = (lo..=hi)
        .map(|i| {
            let cols = column_range(f, i);
            let j0 = *cols.start();
            cols.map(|j| f.minor(i, j, size)).collect::<Result<Vec<_>, _>>().map(|v| (i, j0, v))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DualArray { k: f.k(), n: f.n(), rows })
}

/// True when some `(k-1)`-minor that is not structurally zero vanishes.
pub fn dual_band_has_zero(f: &FriezePattern) -> Result<bool, PatternError> {
    let structural = structural_zero_offsets(f.k(), f.n());
    let d = dual(f)?;
    Ok(d.rows.iter().any(|(i, j0, vals)| {
        vals.iter().enumerate().any(|(c, v)| {
            let off = j0 + c as i64 - i;
            v.is_zero() && !structural[(off + f.k() as i64) as usize]
        })
    }))
}

/// Searches `(s, t)` with `|s|, |t| <= n+k+1` such that
/// `D^{k-1}_{i,j} = a_{j+t, i+s}` on the whole dual period. Offsets are tried
/// in order of `|s| + |t|`, then `s`, then `t`.
pub fn locate_dual_offset(f: &FriezePattern) -> Result<Option<(i64, i64)>, PatternError> {
    if !f.is_periodic() {
        return Err(PatternError::NotPeriodic);
    }
    let d = dual(f)?;
    let p = f.glide_period();
    let mut offsets: Vec<(i64, i64)> = (-p..=p).flat_map(|s| (-p..=p).map(move |t| (s, t))).collect();
    offsets.sort_by_key(|&(s, t)| (s.abs() + t.abs(), s, t));
    for (s, t) in offsets {
        let mut ok = true;
        'outer: for (i, j0, vals) in &d.rows {
            for (c, v) in vals.iter().enumerate() {
                let j = j0 + c as i64;
                if f.at(j + t, i + s)? != *v {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if ok {
            return Ok(Some((s, t)));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaCheck {
    /// `D^ℓ_{1,j} > 0` for `ℓ = 1..k-1`, `j = 1..n` (row 1 being the first stored row).
    pub hypothesis: bool,
    /// The pattern is generic.
    pub conclusion: bool,
}

impl LemmaCheck {
    pub fn holds(&self) -> bool {
        !self.hypothesis || self.conclusion
    }
}

pub fn lemma_hypothesis(f: &FriezePattern) -> Result<bool, PatternError> {
    let first = f.row_span().0;
    for size in 1..f.k() {
        for c in 0..f.n() as i64 {
            if !f.minor(first, first + c, size)?.is_positive() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn lemma_check(f: &FriezePattern) -> Result<LemmaCheck, PatternError> {
    Ok(LemmaCheck { hypothesis: lemma_hypothesis(f)?, conclusion: classify(f)?.generic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::pattern::DenseArray;

    fn sec1() -> FriezePattern {
        FriezePattern::from_i64(3, 4, &[vec![3, 8, 4, 7], vec![3, 2, 4, 1]], Vertical::Periodic(2)).unwrap()
    }

    #[test]
    fn slk_pass_and_fail() {
        assert!(verify_slk(&sec1(), None).unwrap().passed());
        let broken =
            FriezePattern::from_i64(3, 4, &[vec![4, 8, 4, 7], vec![3, 2, 4, 1]], Vertical::Periodic(2)).unwrap();
        let r = verify_slk(&broken, None).unwrap();
        assert!(!r.passed());
        // c[1][1] sits at (1,1); only windows containing it can change
        assert!(r.failures.iter().any(|(p, _)| p.i == 1 && (-1..=1).contains(&p.j)));
        let ones = FriezePattern::from_i64(2, 1, &[vec![1]], Vertical::Periodic(1)).unwrap();
        let r = verify_slk(&ones, None).unwrap();
        assert!(r.failures.iter().any(|(_, d)| *d == rat(0)));
    }

    #[test]
    fn structural_zeros_for_sl3() {
        // offsets -3..=5 for 2x2 minors
        let s = structural_zero_offsets(3, 4);
        assert_eq!(s, vec![true, true, false, false, false, false, false, false, true]);
        let s2 = structural_zero_offsets(2, 1);
        assert_eq!(s2, vec![true, false, false, false, true]);
    }

    #[test]
    fn classify_sec1() {
        let r = classify(&sec1()).unwrap();
        assert!(r.is_slk && r.tame && r.positive && r.integral && r.generic && r.nonzero);
        assert_eq!(r.period, PeriodInfo::Found(2));
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn sylvester_on_dense_and_frieze() {
        let a = DenseArray::new((1..=6).map(|r| (1..=6).map(|c| rat((r * 7 + c * c) % 11 - 5)).collect()).collect());
        for l in 1..=4 {
            for i in 1..=(5 - l as i64) {
                for j in 1..=(5 - l as i64) {
                    assert_eq!(sylvester_residual(&a, i, j, l).unwrap(), rat(0));
                }
            }
        }
        assert_eq!(sylvester_residual(&sec1(), 1, 1, 2).unwrap(), rat(0));
        assert_eq!(sylvester_residual(&sec1(), 1, 1, 0), Err(PatternError::SizeTooSmall(1)));
    }

    #[test]
    fn lemma_and_dual_on_sec1() {
        assert_eq!(lemma_check(&sec1()).unwrap(), LemmaCheck { hypothesis: true, conclusion: true });
        assert!(locate_dual_offset(&sec1()).unwrap().is_some());
        assert!(!dual_band_has_zero(&sec1()).unwrap());
        let w = sec1().restrict(1, 4).unwrap();
        assert_eq!(locate_dual_offset(&w), Err(PatternError::NotPeriodic));
    }

    #[test]
    fn window_period_reporting() {
        let rows: Vec<Vec<i64>> = (0..10).map(|x| vec![1 + (x % 3)]).collect();
        let f = FriezePattern::from_i64(2, 1, &rows, Vertical::Window { first_index: 1 }).unwrap();
        assert_eq!(minimal_period(&f), PeriodInfo::Found(3));
        let rows: Vec<Vec<i64>> = (0..10).map(|x| vec![x]).collect();
        let f = FriezePattern::from_i64(2, 1, &rows, Vertical::Window { first_index: 1 }).unwrap();
        assert_eq!(minimal_period(&f), PeriodInfo::NoneUpTo(5));
    }
}
