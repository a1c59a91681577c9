//! Reader for frieze arrays typeset as LaTeX `array` bodies
//! (`1 & 0 & 0 & 1 & 3 \\ ...`).
//!
//! The printed block is a rectangular excerpt of the bi-infinite array. Each
//! row's band is located by trying every horizontal phase for the first row
//! (later rows shift one column right per row) and keeping the single phase
//! under which every visible cell agrees with the border/zero/glide layout.

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PrintedCell {
    Int(BigInt),
    /// A placeholder `a_{index}` standing for a value given elsewhere.
    Symbol(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrintedError {
    #[error("cannot read cell {0:?}")]
    BadCell(String),
    #[error("printed rows have different widths")]
    Ragged,
    #[error("no horizontal phase matches the border layout")]
    NoPhase,
    #[error("{0} horizontal phases match the border layout")]
    Ambiguous(usize),
    #[error("a symbolic cell falls on a border, zero or sign-flipped position")]
    SymbolOutsideBand,
}

/// Splits an `array` body into cells. Row separators are `\\`; trailing
/// punctuation such as `,` or `.` after the last row is ignored.
pub fn read_cells(text: &str) -> Result<Vec<Vec<PrintedCell>>, PrintedError> {
    let mut rows = Vec::new();
    for line in text.split("\\\\") {
        let line = line.trim().trim_end_matches([',', '.']).trim();
        if line.is_empty() {
            continue;
        }
        let row = line.split('&').map(|c| read_cell(c.trim())).collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Err(PrintedError::Ragged);
    }
    Ok(rows)
}

fn read_cell(s: &str) -> Result<PrintedCell, PrintedError> {
    if let Some(rest) = s.strip_prefix("a_") {
        let idx = rest.trim_start_matches('{').trim_end_matches('}');
        return idx.parse().map(PrintedCell::Symbol).map_err(|_| PrintedError::BadCell(s.to_string()));
    }
    s.parse::<BigInt>().map(PrintedCell::Int).map_err(|_| PrintedError::BadCell(s.to_string()))
}

/// Recovers the `n`-entry bands of every printed row.
pub fn parse_bands(k: usize, n: usize, cells: &[Vec<PrintedCell>]) -> Result<Vec<Vec<PrintedCell>>, PrintedError> {
    let p = (n + k + 1) as i64;
    let flip = k.is_multiple_of(2);
    let mut found = Vec::new();
    for phase in 0..p {
        match bands_at_phase(n, p, flip, phase, cells) {
            Ok(Some(bands)) => found.push(bands),
            Ok(None) => {}
            Err(e) => return Err(e),
        }
    }
    match found.len() {
        0 => Err(PrintedError::NoPhase),
        1 => Ok(found.pop().unwrap()),
        m => Err(PrintedError::Ambiguous(m)),
    }
}

fn bands_at_phase(
    n: usize,
    p: i64,
    flip: bool,
    phase: i64,
    cells: &[Vec<PrintedCell>],
) -> Result<Option<Vec<Vec<PrintedCell>>>, PrintedError> {
    let one = PrintedCell::Int(1.into());
    let zero = PrintedCell::Int(0.into());
    let mut bands = Vec::with_capacity(cells.len());
    for (r, row) in cells.iter().enumerate() {
        let border = phase + r as i64;
        let mut band: Vec<Option<PrintedCell>> = vec![None; n];
        for (x, cell) in row.iter().enumerate() {
            let d = x as i64 - border;
            let negate = flip && d.div_euclid(p).rem_euclid(2) == 1;
            let value = match (cell, negate) {
                (PrintedCell::Int(v), true) => PrintedCell::Int(-v),
                (PrintedCell::Symbol(_), true) => return Err(PrintedError::SymbolOutsideBand),
                (c, false) => c.clone(),
            };
            let slot = d.rem_euclid(p) as usize;
            if slot == 0 || slot == n + 1 {
                if value != one {
                    return Ok(None);
                }
            } else if slot <= n {
                match &band[slot - 1] {
                    None => band[slot - 1] = Some(value),
                    Some(prev) if *prev == value => {}
                    Some(_) => return Ok(None),
                }
            } else if value != zero {
                return Ok(None);
            }
        }
        match band.into_iter().collect::<Option<Vec<_>>>() {
            Some(b) => bands.push(b),
            None => return Ok(None),
        }
    }
    Ok(Some(bands))
}

/// Bands of a purely numeric printed array.
pub fn parse_numeric(k: usize, n: usize, text: &str) -> Result<Vec<Vec<Rational>>, PrintedError> {
    let bands = parse_bands(k, n, &read_cells(text)?)?;
    bands
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| match c {
                    PrintedCell::Int(v) => Ok(Rational::from_integer(v)),
                    PrintedCell::Symbol(i) => Err(PrintedError::BadCell(format!("a_{{{i}}}"))),
                })
                .collect()
        })
        .collect()
}
