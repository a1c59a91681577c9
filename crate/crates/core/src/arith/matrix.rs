use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Zero};

use super::{format_rational, ArithError, Rational};

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, ArithError> {
        if entries.len() != rows * cols {
            return Err(ArithError::BadShape { rows, cols, len: entries.len() });
        }
        Ok(ExactMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, ArithError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let len = rows.iter().map(Vec::len).sum();
        if rows.iter().any(|row| row.len() != c) {
            return Err(ArithError::BadShape { rows: r, cols: c, len });
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, ArithError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect()).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn scale(&self, s: &Rational) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e * s).collect() }
    }

    pub fn det(&self) -> Result<Rational, ArithError> {
        det_exact(self)
    }

    /// Solves `self · X = rhs` by Gauss-Jordan elimination over Q.
    /// Returns `None` when `self` is singular.
    pub fn solve(&self, rhs: &ExactMatrix) -> Result<Option<ExactMatrix>, ArithError> {
        if !self.is_square() {
            return Err(ArithError::NonSquare { rows: self.rows, cols: self.cols });
        }
        if rhs.rows != self.rows {
            return Err(ArithError::BadShape { rows: rhs.rows, cols: rhs.cols, len: self.rows });
        }
        let n = self.rows;
        let mut aug: Vec<Vec<Rational>> =
            (0..n).map(|r| self.row(r).iter().chain(rhs.row(r)).cloned().collect()).collect();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !aug[r][col].is_zero()) else {
                return Ok(None);
            };
            aug.swap(col, piv);
            let inv = aug[col][col].recip();
            for v in aug[col].iter_mut() {
                *v *= &inv;
            }
            let pivot = aug[col].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (v, p) in row.iter_mut().zip(&pivot).skip(col) {
                        *v -= &f * p;
                    }
                }
            }
        }
        let entries = aug.into_iter().flat_map(|row| row.into_iter().skip(n)).collect();
        Ok(Some(ExactMatrix { rows: n, cols: rhs.cols, entries }))
    }
}

impl<'a> Mul<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;

    fn mul(self, o: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let mut out = ExactMatrix::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let v = a * o.get(k, c);
                    out.entries[r * o.cols + c] += v;
                }
            }
        }
        out
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(format_rational).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Exact determinant.
///
/// Each row is scaled by the lcm of its denominators, the resulting integer
/// matrix goes through Bareiss fraction-free elimination, and the scaling is
/// divided back out at the end. A 0×0 matrix has determinant 1.
pub fn det_exact(m: &ExactMatrix) -> Result<Rational, ArithError> {
    if !m.is_square() {
        return Err(ArithError::NonSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for r in 0..n {
        let row = m.row(r);
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        scale *= l;
    }
    let det = bareiss(&mut a);
    Ok(Rational::new(det, scale))
}

/// In-place Bareiss elimination on a square integer matrix; returns the
/// determinant. Every division is exact.
fn bareiss(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}
