//! Solving for the next band row from k−1 given rows.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{det_exact, ExactMatrix, Rational};
use crate::pattern::{Array, FriezePattern, PatternError, Position};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// Integers in `lo..=hi`.
    IntegerRange { lo: i64, hi: i64 },
    /// Any rational; free entries are reported, not enumerated.
    ExactRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Continuation {
    /// Every pivot is nonzero. The row is not filtered by the constraint.
    Unique(Vec<Rational>),
    /// Some pivot vanishes. `free_positions` are 1-based band columns.
    Free { solutions: Vec<Vec<Rational>>, free_positions: Vec<usize> },
    /// The window with this top-left corner cannot reach determinant 1.
    /// The first given row has index 0.
    Inconsistent(Position),
}

/// Arithmetic used by the solver: exact rationals, or machine integers when
/// every known entry is small.
trait Scalar: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
    /// `num / den` if it exists in this domain.
    fn quotient(num: &Self, den: &Self) -> Option<Self>;
    fn in_range(&self, lo: i64, hi: i64) -> bool;
    fn to_rational(&self) -> Rational;
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn quotient(num: &Self, den: &Self) -> Option<Self> {
        (num % den == 0).then(|| num / den)
    }
    fn in_range(&self, lo: i64, hi: i64) -> bool {
        (lo as i128..=hi as i128).contains(self)
    }
    fn to_rational(&self) -> Rational {
        Rational::from_integer((*self).into())
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v.into())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn quotient(num: &Self, den: &Self) -> Option<Self> {
        Some(num / den)
    }
    fn in_range(&self, lo: i64, hi: i64) -> bool {
        self.is_integer() && *self >= Self::from_i64(lo) && *self <= Self::from_i64(hi)
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
}

/// Entry of the new row inside a window: a constant from the layout, or
/// the unknown band entry `s` (0-based).
#[derive(Clone)]
enum Slot<T> {
    Known(T),
    Unknown(usize),
}

/// One k×k window with top row 0 at column `j`, expanded along its last
/// (new) row: `det = Σ_t slot_t · cofactor_t`.
struct Window<T> {
    j: i64,
    slots: Vec<Slot<T>>,
    cofactors: Vec<T>,
}

impl<T: Scalar> Window<T> {
    fn det(&self, x: &[T]) -> T {
        self.slots.iter().zip(&self.cofactors).fold(T::zero(), |acc, (s, c)| {
            let v = match s {
                Slot::Known(v) => v.clone(),
                Slot::Unknown(u) => x[*u].clone(),
            };
            acc.add(&v.mul(c))
        })
    }
}

struct Problem<T> {
    n: usize,
    /// Windows at `j = 0..=n+k`, one per column class modulo n+k+1.
    windows: Vec<Window<T>>,
}

fn build<T: Scalar>(known: &FriezePattern, conv: impl Fn(&Rational) -> T) -> Result<Problem<T>, PatternError> {
    let (k, n) = (known.k(), known.n());
    let p = (n + k + 1) as i64;
    // the new row is index k-1; its layout constants come from a placeholder
    let mut rows = known.stored_rows().to_vec();
    rows.push(vec![<Rational as Zero>::zero(); n]);
    let full = FriezePattern::window_mode(k, n, 0, rows)?;
    let mut windows = Vec::with_capacity(p as usize);
    for j in 0..p {
        let block = known.window_rect(0, j, k - 1, k)?;
        let mut slots = Vec::with_capacity(k);
        let mut cofactors = Vec::with_capacity(k);
        for t in 0..k {
            let c = j + t as i64;
            let s = c - (k as i64 - 1);
            slots.push(if (0..n as i64).contains(&s) {
                Slot::Unknown(s as usize)
            } else {
                Slot::Known(conv(&full.at(k as i64 - 1, c)?))
            });
            let minor: Vec<Vec<Rational>> =
                (0..k - 1).map(|r| (0..k).filter(|&cc| cc != t).map(|cc| block.get(r, cc).clone()).collect()).collect();
            let d = det_exact(&ExactMatrix::from_rows(minor).expect("rectangular")).expect("square minor");
            let d = if (k - 1 + t) % 2 == 0 { d } else { -d };
            cofactors.push(conv(&d));
        }
        windows.push(Window { j, slots, cofactors });
    }
    Ok(Problem { n, windows })
}

fn normalize(j: i64, n: usize, k: usize) -> i64 {
    let p = (n + k + 1) as i64;
    if j > n as i64 + 1 {
        j - p
    } else {
        j
    }
}

fn solve<T: Scalar>(prob: &Problem<T>, k: usize, constraint: Constraint) -> Continuation {
    let n = prob.n;
    let one = T::one();
    let bad = |j: i64| Continuation::Inconsistent(Position::new(0, normalize(j, n, k)));
    // windows past the band involve no unknowns
    for w in &prob.windows[n + k - 1..] {
        if w.slots.iter().all(|s| matches!(s, Slot::Known(_))) && w.det(&[]) != one {
            return bad(w.j);
        }
    }
    let pivots: Vec<&T> = (0..n).map(|s| &prob.windows[s].cofactors[k - 1]).collect();
    let free: Vec<usize> = (0..n).filter(|&s| pivots[s].is_zero()).collect();

    // the prefix before the first free position is forced
    let first_free = free.first().copied().unwrap_or(n);
    let mut x: Vec<T> = vec![T::zero(); n];
    for s in 0..first_free {
        let rest = prob.windows[s].det(&x);
        match T::quotient(&one.sub(&rest), pivots[s]) {
            Some(v) => x[s] = v,
            // not solvable in this domain (non-integral forced value)
            None => return Continuation::Free { solutions: Vec::new(), free_positions: Vec::new() },
        }
    }
    if free.is_empty() {
        for w in &prob.windows[n..n + k - 1] {
            if w.det(&x) != one {
                return bad(w.j);
            }
        }
        return Continuation::Unique(x.iter().map(T::to_rational).collect());
    }
    let free_positions: Vec<usize> = free.iter().map(|s| s + 1).collect();
    if prob.windows[first_free].det(&x) != one {
        return bad(first_free as i64);
    }
    let (lo, hi) = match constraint {
        Constraint::IntegerRange { lo, hi } => (lo, hi),
        Constraint::ExactRational => return Continuation::Free { solutions: Vec::new(), free_positions },
    };
    if (0..first_free).any(|s| !x[s].in_range(lo, hi)) {
        return Continuation::Free { solutions: Vec::new(), free_positions };
    }
    let mut solutions = Vec::new();
    dfs(prob, k, first_free, &mut x, lo, hi, &mut solutions);
    Continuation::Free { solutions, free_positions }
}

fn dfs<T: Scalar>(
    prob: &Problem<T>,
    k: usize,
    s: usize,
    x: &mut Vec<T>,
    lo: i64,
    hi: i64,
    out: &mut Vec<Vec<Rational>>,
) {
    let n = prob.n;
    let one = T::one();
    if s == n {
        if prob.windows[n..n + k - 1].iter().all(|w| w.det(x) == one) {
            out.push(x.iter().map(T::to_rational).collect());
        }
        return;
    }
    let w = &prob.windows[s];
    let pivot = &w.cofactors[k - 1];
    x[s] = T::zero();
    let rest = w.det(x);
    if pivot.is_zero() {
        if rest != one {
            return;
        }
        for v in lo..=hi {
            x[s] = T::from_i64(v);
            dfs(prob, k, s + 1, x, lo, hi, out);
        }
    } else if let Some(v) = T::quotient(&one.sub(&rest), pivot) {
        if v.in_range(lo, hi) {
            x[s] = v;
            dfs(prob, k, s + 1, x, lo, hi, out);
        }
    }
}

const SMALL: i64 = 1 << 20;

/// Solves for the band row following `rows` (k−1 rows of length n) so that
/// every new k×k window has determinant 1.
pub fn continue_row(
    k: usize,
    n: usize,
    rows: &[Vec<Rational>],
    constraint: Constraint,
) -> Result<Continuation, PatternError> {
    if rows.len() + 1 != k {
        return Err(PatternError::PeriodMismatch { declared: k - 1, given: rows.len() });
    }
    let known = FriezePattern::window_mode(k, n, 0, rows.to_vec())?;
    let small = k <= 4
        && matches!(constraint, Constraint::IntegerRange { lo, hi } if lo.abs() < SMALL && hi.abs() < SMALL)
        && rows.iter().flatten().all(|v| v.is_integer() && v.abs() < Rational::from_integer(SMALL.into()));
    Ok(if small {
        let prob = build(&known, |v| v.to_integer().to_i128().expect("small entry"))?;
        solve(&prob, k, constraint)
    } else {
        let prob = build(&known, Rational::clone)?;
        solve(&prob, k, constraint)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn rows(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn cc_unique() {
        // k=2: c_i c_{i+1} = 2 at height 1
        let r = continue_row(2, 1, &rows(&[&[1]]), Constraint::ExactRational).unwrap();
        assert_eq!(r, Continuation::Unique(vec![rat(2)]));
        let r = continue_row(2, 1, &rows(&[&[4]]), Constraint::ExactRational).unwrap();
        assert_eq!(r, Continuation::Unique(vec![Rational::new(1.into(), 2.into())]));
    }

    #[test]
    fn wrong_row_count() {
        assert!(continue_row(3, 2, &rows(&[&[1, 1]]), Constraint::ExactRational).is_err());
    }
}
