//! Transfer-matrix factorization of tame friezes.

use num_traits::{One, Zero};

use crate::arith::{ArithError, ExactMatrix, Rational};
use crate::pattern::{Array, FriezePattern, PatternError, Vertical};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum XiError {
    #[error("expected a tuple of length {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("sequence length {len} does not give a positive height for k = {k}")]
    BadLength { k: usize, len: usize },
    #[error("pattern is wild: transfer matrix B_{j} differs between rows {i} and {other}")]
    WildInput { j: i64, i: i64, other: i64 },
    #[error("transfer matrix B_{j} (row {i}) is not of xi shape")]
    NotXiShape { i: i64, j: i64 },
    #[error("window at ({i}, {j}) is singular")]
    NonInvertibleWindow { i: i64, j: i64 },
    #[error("sequence does not close up: row {i}, column {j} has {value}")]
    NonClosing { i: i64, j: i64, value: Rational },
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

fn sign(e: usize) -> Rational {
    if e.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// The k×k matrix with subdiagonal ones and last column
/// `(-1)^{k+1}, (-1)^{k-2} c_1, ..., -c_{k-2}, c_{k-1}`.
pub fn xi_matrix(k: usize, tuple: &[Rational]) -> Result<ExactMatrix, XiError> {
    if tuple.len() + 1 != k {
        return Err(XiError::ArityMismatch { expected: k.saturating_sub(1), got: tuple.len() });
    }
    let mut m = ExactMatrix::zeros(k, k);
    for r in 1..k {
        m.set(r, r - 1, Rational::one());
        m.set(r, k - 1, sign(k - 1 - r) * &tuple[r - 1]);
    }
    m.set(0, k - 1, sign(k + 1));
    Ok(m)
}

/// Reads the tuple back from a matrix, or `None` if it is not of ξ shape.
pub fn xi_tuple(m: &ExactMatrix) -> Option<Vec<Rational>> {
    let k = m.rows();
    if !m.is_square() || k < 2 {
        return None;
    }
    for r in 0..k {
        for c in 0..k - 1 {
            let want = if r == c + 1 { Rational::one() } else { Rational::zero() };
            if *m.get(r, c) != want {
                return None;
            }
        }
    }
    if *m.get(0, k - 1) != sign(k + 1) {
        return None;
    }
    Some((1..k).map(|r| sign(k - 1 - r) * m.get(r, k - 1)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiSequence {
    k: usize,
    n: usize,
    tuples: Vec<Vec<Rational>>,
}

impl XiSequence {
    /// Checks arities and that the length is `n+k+1` for some `n >= 1`.
    /// The product identity is checked by [`XiSequence::product_is_scalar`]
    /// and by [`reconstruct`].
    pub fn new(k: usize, tuples: Vec<Vec<Rational>>) -> Result<Self, XiError> {
        if k < 2 {
            return Err(PatternError::BadOrder(k).into());
        }
        if tuples.len() < k + 2 {
            return Err(XiError::BadLength { k, len: tuples.len() });
        }
        if let Some(t) = tuples.iter().find(|t| t.len() + 1 != k) {
            return Err(XiError::ArityMismatch { expected: k - 1, got: t.len() });
        }
        Ok(XiSequence { k, n: tuples.len() - k - 1, tuples })
    }

    pub fn from_i64(k: usize, tuples: &[Vec<i64>]) -> Result<Self, XiError> {
        Self::new(k, tuples.iter().map(|t| t.iter().map(|&v| Rational::from_integer(v.into())).collect()).collect())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tuples(&self) -> &[Vec<Rational>] {
        &self.tuples
    }

    /// Tuple for column `j`, indices taken modulo `n+k+1` (1-based).
    pub fn tuple(&self, j: i64) -> &[Rational] {
        let p = self.tuples.len() as i64;
        &self.tuples[(j - 1).rem_euclid(p) as usize]
    }

    pub fn matrices(&self) -> Vec<ExactMatrix> {
        self.tuples.iter().map(|t| xi_matrix(self.k, t).expect("arity checked")).collect()
    }

    /// `ξ_1 ξ_2 ... ξ_{n+k+1}`.
    pub fn product(&self) -> ExactMatrix {
        self.matrices().iter().fold(ExactMatrix::identity(self.k), |acc, m| &acc * m)
    }

    pub fn product_is_scalar(&self) -> bool {
        let eps = sign(self.k - 1);
        self.product() == ExactMatrix::identity(self.k).scale(&eps)
    }
}

fn transfer(f: &FriezePattern, i: i64, j: i64) -> Result<ExactMatrix, XiError> {
    let w = f.window(i, j, f.k())?;
    let next = f.window(i, j + 1, f.k())?;
    w.solve(&next)?.ok_or(XiError::NonInvertibleWindow { i, j })
}

/// Computes `B_j = F_{i,j}^{-1} F_{i,j+1}` for `j = 1..n+k+1`, checking that it
/// does not depend on `i` (rows `1..=max(3, m)`) and has ξ shape.
pub fn extract_xi(f: &FriezePattern) -> Result<XiSequence, XiError> {
    let m = match f.vertical() {
        Vertical::Periodic(m) => m as i64,
        Vertical::Window { .. } => return Err(PatternError::NotPeriodic.into()),
    };
    let p = f.glide_period();
    let rows = m.max(3);
    let tuples = (1..=p)
        .map(|j| {
            let b = transfer(f, 1, j)?;
            for i in 2..=rows {
                if transfer(f, i, j)? != b {
                    return Err(XiError::WildInput { j, i: 1, other: i });
                }
            }
            xi_tuple(&b).ok_or(XiError::NotXiShape { i: 1, j })
        })
        .collect::<Result<Vec<_>, _>>()?;
    XiSequence::new(f.k(), tuples)
}

/// Regenerates rows from their borders by the column recurrence
/// `a_{i,j+k} = ε a_{i,j} + Σ_r (-1)^{k-1-r} c_r(j) a_{i,j+r}`.
pub fn reconstruct(s: &XiSequence) -> Result<FriezePattern, XiError> {
    let (k, n) = (s.k, s.n);
    let p = (n + k + 1) as i64;
    let eps = sign(k - 1);
    let mut bands = Vec::new();
    for i in 1..=2 * p {
        // entries a_{i, i-k ..= i+n+k-1}
        let mut row: Vec<Rational> = vec![Rational::zero(); k - 1];
        row.push(Rational::one());
        for t in 0..(n + k) {
            let j = i - k as i64 + t as i64;
            let c = s.tuple(j);
            let mut v = &eps * &row[t];
            for r in 1..k {
                v += sign(k - 1 - r) * &c[r - 1] * &row[t + r];
            }
            row.push(v);
        }
        let at = |j: i64| &row[(j - (i - k as i64)) as usize];
        for j in i + n as i64..i + (n + k) as i64 {
            let want = if j == i + n as i64 { Rational::one() } else { Rational::zero() };
            if *at(j) != want {
                return Err(XiError::NonClosing { i, j, value: at(j).clone() });
            }
        }
        bands.push((i..i + n as i64).map(|j| at(j).clone()).collect::<Vec<_>>());
    }
    let len = bands.len();
    let m =
        (1..=len).filter(|d| len % d == 0).find(|&d| (0..len).all(|x| bands[x] == bands[(x + d) % len])).unwrap_or(len);
    bands.truncate(m);
    Ok(FriezePattern::periodic(k, n, bands)?)
}
