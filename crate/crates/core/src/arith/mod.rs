//! Exact arithmetic: big rationals, the real quadratic field Q(√80) and
//! fraction-free determinants. Every other module computes through here.

mod matrix;
mod quad;

pub use matrix::{det_exact, ExactMatrix};
pub use quad::QuadNumber;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Arbitrary-precision integer.
pub type Integer = BigInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("entry count {len} does not match shape {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, len: usize },
    #[error("cannot parse rational from {0:?}")]
    BadRational(String),
}

pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn rat_frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Returns the integer value of `x` when its denominator is one.
pub fn as_integer(x: &Rational) -> Option<Integer> {
    x.is_integer().then(|| x.numer().clone())
}

/// Parses `"-12"` or `"p/q"` (q nonzero) into a canonical rational.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let bad = || ArithError::BadRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        None => t.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Canonical text form: `"n"` for integers, `"p/q"` otherwise.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_zero() {
        let x = rat_frac(6, -4);
        let z = &x + (-x.clone());
        assert_eq!(z.numer(), &BigInt::from(0));
        assert_eq!(z.denom(), &BigInt::from(1));
        assert_eq!(format_rational(&x), "-3/2");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("12305").unwrap(), rat(12305));
        assert_eq!(parse_rational("-6/4").unwrap(), rat_frac(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(as_integer(&rat_frac(3, 2)), None);
        assert_eq!(as_integer(&rat(-7)), Some(BigInt::from(-7)));
    }
}
