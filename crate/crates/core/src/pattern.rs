//! The frieze data model: band rows, the glide extension to a bi-infinite
//! array `a[i][j]`, window extraction and adjacent minors.
//!
//! Row `i` carries its band `c[i][1..=n]` in columns `i..=i+n-1`, preceded by
//! a border 1 in column `i-1` and followed by a border 1 in column `i+n` and
//! `k-1` zeros. Horizontally the row repeats with period `n+k+1`, every
//! repetition multiplied by `ε = (-1)^(k-1)`.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{det_exact, format_rational, ExactMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("order k = {0} is invalid, need k >= 2")]
    BadOrder(usize),
    #[error("height must be at least 1")]
    ZeroHeight,
    #[error("no band rows given")]
    NoRows,
    #[error("band row {row} has {len} entries, expected {expected}")]
    ShapeMismatch { row: usize, len: usize, expected: usize },
    #[error("periodic mode declares period {declared} but {given} rows were given")]
    PeriodMismatch { declared: usize, given: usize },
    #[error("row {0} is outside the stored rows")]
    RowOutOfRange(i64),
    #[error("operation needs a vertically periodic pattern")]
    NotPeriodic,
    #[error("minor size must be at least {0}")]
    SizeTooSmall(usize),
}

/// A cell of the bi-infinite array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub i: i64,
    pub j: i64,
}

impl Position {
    pub fn new(i: i64, j: i64) -> Self {
        Position { i, j }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

/// How the stored band rows cover the vertical direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vertical {
    /// Row `i` is stored row `(i - 1) mod period`; every row is resolvable.
    Periodic(usize),
    /// Rows `first_index ..` are stored; anything else is out of range.
    Window { first_index: i64 },
}

/// Anything indexable as a two-dimensional array over Z².
pub trait Array {
    fn at(&self, i: i64, j: i64) -> Result<Rational, PatternError>;

    /// The ℓ×ℓ adjacent submatrix with top-left entry `a[i][j]`.
    fn window(&self, i: i64, j: i64, size: usize) -> Result<ExactMatrix, PatternError> {
        self.window_rect(i, j, size, size)
    }

    /// The `rows × cols` block with top-left entry `a[i][j]`.
    fn window_rect(&self, i: i64, j: i64, rows: usize, cols: usize) -> Result<ExactMatrix, PatternError> {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows as i64 {
            for c in 0..cols as i64 {
                entries.push(self.at(i + r, j + c)?);
            }
        }
        Ok(ExactMatrix::new(rows, cols, entries).expect("shape matches"))
    }

    /// `D[i][j]^size`, with `D^0 = 1`.
    fn minor(&self, i: i64, j: i64, size: usize) -> Result<Rational, PatternError> {
        if size == 0 {
            return Ok(Rational::one());
        }
        let w = self.window(i, j, size)?;
        Ok(det_exact(&w).expect("window is square"))
    }
}

/// An SL_k frieze pattern stored as band rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FriezePattern {
    k: usize,
    n: usize,
    rows: Vec<Vec<Rational>>,
    vertical: Vertical,
}

impl FriezePattern {
    /// Validates shape only; the SL_k condition is checked by `classify`.
    pub fn from_band_rows(
        k: usize,
        n: usize,
        rows: Vec<Vec<Rational>>,
        vertical: Vertical,
    ) -> Result<Self, PatternError> {
        if k < 2 {
            return Err(PatternError::BadOrder(k));
        }
        if n == 0 {
            return Err(PatternError::ZeroHeight);
        }
        if rows.is_empty() {
            return Err(PatternError::NoRows);
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(PatternError::ShapeMismatch { row, len: r.len(), expected: n });
        }
        if let Vertical::Periodic(m) = vertical {
            if m != rows.len() {
                return Err(PatternError::PeriodMismatch { declared: m, given: rows.len() });
            }
        }
        Ok(FriezePattern { k, n, rows, vertical })
    }

    pub fn periodic(k: usize, n: usize, rows: Vec<Vec<Rational>>) -> Result<Self, PatternError> {
        let m = rows.len();
        Self::from_band_rows(k, n, rows, Vertical::Periodic(m))
    }

    pub fn window_mode(k: usize, n: usize, first_index: i64, rows: Vec<Vec<Rational>>) -> Result<Self, PatternError> {
        Self::from_band_rows(k, n, rows, Vertical::Window { first_index })
    }

    /// Convenience constructor from small integer bands.
    pub fn from_i64(k: usize, n: usize, rows: &[Vec<i64>], vertical: Vertical) -> Result<Self, PatternError> {
        let rows = rows.iter().map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect()).collect();
        Self::from_band_rows(k, n, rows, vertical)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The height: band entries per row.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `ε = (-1)^(k-1)`.
    pub fn epsilon(&self) -> i64 {
        if self.k % 2 == 1 {
            1
        } else {
            -1
        }
    }

    /// Horizontal glide period `n + k + 1`.
    pub fn glide_period(&self) -> i64 {
        (self.n + self.k + 1) as i64
    }

    pub fn vertical(&self) -> Vertical {
        self.vertical
    }

    pub fn stored_rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<Rational>> {
        self.rows
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.vertical, Vertical::Periodic(_))
    }

    /// Stored period in periodic mode.
    pub fn stored_period(&self) -> Option<usize> {
        match self.vertical {
            Vertical::Periodic(m) => Some(m),
            Vertical::Window { .. } => None,
        }
    }

    /// Inclusive range of row indices that are stored. For periodic patterns
    /// this is one vertical period starting at row 1.
    pub fn row_span(&self) -> (i64, i64) {
        match self.vertical {
            Vertical::Periodic(m) => (1, m as i64),
            Vertical::Window { first_index } => (first_index, first_index + self.rows.len() as i64 - 1),
        }
    }

    /// Band row `c[i][1..=n]`.
    pub fn band(&self, i: i64) -> Result<&[Rational], PatternError> {
        match self.vertical {
            Vertical::Periodic(m) => Ok(&self.rows[(i - 1).rem_euclid(m as i64) as usize]),
            Vertical::Window { first_index } => {
                let off = i - first_index;
                if off < 0 || off >= self.rows.len() as i64 {
                    Err(PatternError::RowOutOfRange(i))
                } else {
                    Ok(&self.rows[off as usize])
                }
            }
        }
    }

    pub fn has_row(&self, i: i64) -> bool {
        self.band(i).is_ok()
    }

    pub fn entry(&self, p: Position) -> Result<Rational, PatternError> {
        self.at(p.i, p.j)
    }

    /// Inclusive range of row indices `i` such that rows `i..i+size` are all
    /// available: one period for periodic patterns, the stored strip
    /// otherwise. `None` when the strip is too short.
    pub fn window_rows(&self, size: usize) -> Option<(i64, i64)> {
        let (lo, hi) = self.row_span();
        match self.vertical {
            Vertical::Periodic(_) => Some((lo, hi)),
            Vertical::Window { .. } => {
                let last = hi - size as i64 + 1;
                (last >= lo).then_some((lo, last))
            }
        }
    }

    /// Rows indexed `lo..=hi` in Window mode, cloning from this pattern.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<FriezePattern, PatternError> {
        let rows = (lo..=hi).map(|i| self.band(i).map(<[Rational]>::to_vec)).collect::<Result<Vec<_>, _>>()?;
        FriezePattern::window_mode(self.k, self.n, lo, rows)
    }
}

impl Array for FriezePattern {
    fn at(&self, i: i64, j: i64) -> Result<Rational, PatternError> {
        let p = self.glide_period();
        let d = j - (i - 1);
        let q = d.div_euclid(p);
        let r = d.rem_euclid(p) as usize;
        let base = if r == 0 || r == self.n + 1 {
            // border columns still need the row to exist in window mode
            self.band(i)?;
            Rational::one()
        } else if r <= self.n {
            self.band(i)?[r - 1].clone()
        } else {
            self.band(i)?;
            return Ok(Rational::zero());
        };
        if self.epsilon() == -1 && q.rem_euclid(2) == 1 {
            Ok(-base)
        } else {
            Ok(base)
        }
    }
}

impl fmt::Display for FriezePattern {
    /// One row per line, `n + k + 1` columns starting at each row's left border.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.row_span();
        for i in lo..=hi {
            let cells: Vec<String> = (0..self.glide_period())
                .map(|c| self.at(i, i - 1 + c).map(|v| format_rational(&v)).unwrap_or_default())
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// A finite matrix addressed with 1-based indices; positions outside it are
/// out of range. Used for identities that hold for arbitrary arrays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseArray {
    rows: Vec<Vec<Rational>>,
}

impl DenseArray {
    pub fn new(rows: Vec<Vec<Rational>>) -> Self {
        DenseArray { rows }
    }

    pub fn size(&self) -> (usize, usize) {
        (self.rows.len(), self.rows.first().map_or(0, Vec::len))
    }
}

impl Array for DenseArray {
    fn at(&self, i: i64, j: i64) -> Result<Rational, PatternError> {
        if i < 1 || j < 1 {
            return Err(PatternError::RowOutOfRange(i));
        }
        self.rows.get(i as usize - 1).and_then(|r| r.get(j as usize - 1)).cloned().ok_or(PatternError::RowOutOfRange(i))
    }
}
