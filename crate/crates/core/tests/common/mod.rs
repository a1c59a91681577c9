//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<Q>]) -> Q {
    match m.len() {
        0 => Q::one(),
        1 => m[0][0].clone(),
        size => {
            let mut acc = Q::zero();
            for c in 0..size {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Q>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(cc, _)| *cc != c).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = &m[0][c] * cofactor_det(&minor);
                if c % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

/// Entry `(i, j)` of the frieze whose row `i` has band `band(i)`: a 1 in
/// column i−1, the band, a 1, k−1 zeros, then repetition with sign
/// `(-1)^{k-1}` every n+k+1 columns.
pub fn layout_entry(k: usize, n: usize, band: &dyn Fn(i64) -> Vec<Q>, i: i64, j: i64) -> Q {
    let p = (n + k + 1) as i64;
    let off = j - (i - 1);
    let (turns, t) = (off.div_euclid(p), off.rem_euclid(p) as usize);
    let v = if t == 0 || t == n + 1 {
        Q::one()
    } else if t <= n {
        band(i)[t - 1].clone()
    } else {
        Q::zero()
    };
    if k.is_multiple_of(2) && turns % 2 != 0 {
        -v
    } else {
        v
    }
}

pub fn window(k: usize, n: usize, band: &dyn Fn(i64) -> Vec<Q>, i: i64, j: i64, size: usize) -> Vec<Vec<Q>> {
    (0..size as i64).map(|r| (0..size as i64).map(|c| layout_entry(k, n, band, i + r, j + c)).collect()).collect()
}

/// Band function for rows stored periodically from row 1.
pub fn periodic_bands(rows: Vec<Vec<Q>>) -> impl Fn(i64) -> Vec<Q> {
    move |i| rows[(i - 1).rem_euclid(rows.len() as i64) as usize].clone()
}

/// Band function for rows stored from `first`.
pub fn window_bands(rows: Vec<Vec<Q>>, first: i64) -> impl Fn(i64) -> Vec<Q> {
    move |i| rows[(i - first) as usize].clone()
}

/// Top-left corners of k×k windows (top row in `rows`) with determinant ≠ 1.
pub fn slk_failures(
    k: usize,
    n: usize,
    band: &dyn Fn(i64) -> Vec<Q>,
    rows: std::ops::RangeInclusive<i64>,
) -> Vec<(i64, i64)> {
    let mut bad = Vec::new();
    for i in rows {
        for j in i - k as i64..=i + n as i64 + 1 {
            if cofactor_det(&window(k, n, band, i, j, k)) != Q::one() {
                bad.push((i, j));
            }
        }
    }
    bad
}

/// Whether every (k+1)×(k+1) window vanishes.
pub fn all_big_minors_vanish(
    k: usize,
    n: usize,
    band: &dyn Fn(i64) -> Vec<Q>,
    rows: std::ops::RangeInclusive<i64>,
) -> bool {
    rows.into_iter()
        .all(|i| (i - k as i64..=i + n as i64 + 1).all(|j| cofactor_det(&window(k, n, band, i, j, k + 1)).is_zero()))
}
