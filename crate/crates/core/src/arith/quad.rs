use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ArithError, Integer, Rational};

/// The radicand. Kept as 80 rather than reduced to 5 so the closed forms
/// in the unbounded construction transcribe without a change of basis.
pub const RADICAND: i64 = 80;

/// An element `a + b·√80` of Q(√80).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadNumber {
    pub a: Rational,
    pub b: Rational,
}

impl QuadNumber {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadNumber { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadNumber { a, b: Rational::zero() }
    }

    pub fn from_int(a: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(a)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `w = 9 + √80`, a unit of norm 1.
    pub fn w() -> Self {
        QuadNumber::new(Rational::from_integer(9.into()), Rational::one())
    }

    /// `√80` itself.
    pub fn sqrt80() -> Self {
        QuadNumber::new(Rational::zero(), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadNumber::new(self.a.clone(), -self.b.clone())
    }

    /// `a² − 80 b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(RADICAND.into()) * &self.b * &self.b
    }

    pub fn scale(&self, s: &Rational) -> Self {
        QuadNumber::new(&self.a * s, &self.b * s)
    }

    pub fn inverse(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::ZeroInverse);
        }
        let n = self.norm();
        Ok(self.conj().scale(&n.recip()))
    }

    pub fn pow(&self, e: i64) -> Result<Self, ArithError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = QuadNumber::one();
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &sq;
            }
            exp >>= 1;
            if exp > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// The integer value, if `b = 0` and `a` is integral.
    pub fn as_integer(&self) -> Option<Integer> {
        if self.b.is_zero() && self.a.is_integer() {
            Some(self.a.numer().clone())
        } else {
            None
        }
    }
}

impl fmt::Display for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√80", self.a, self.b)
    }
}

impl<'a> Add<&'a QuadNumber> for &'a QuadNumber {
    type Output = QuadNumber;
    fn add(self, o: &QuadNumber) -> QuadNumber {
        QuadNumber::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Add for QuadNumber {
    type Output = QuadNumber;
    fn add(self, o: QuadNumber) -> QuadNumber {
        &self + &o
    }
}

impl<'a> Sub<&'a QuadNumber> for &'a QuadNumber {
    type Output = QuadNumber;
    fn sub(self, o: &QuadNumber) -> QuadNumber {
        QuadNumber::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Sub for QuadNumber {
    type Output = QuadNumber;
    fn sub(self, o: QuadNumber) -> QuadNumber {
        &self - &o
    }
}

impl<'a> Mul<&'a QuadNumber> for &'a QuadNumber {
    type Output = QuadNumber;
    fn mul(self, o: &QuadNumber) -> QuadNumber {
        let r = Rational::from_integer(RADICAND.into());
        QuadNumber::new(&self.a * &o.a + r * &self.b * &o.b, &self.a * &o.b + &self.b * &o.a)
    }
}

impl Mul for QuadNumber {
    type Output = QuadNumber;
    fn mul(self, o: QuadNumber) -> QuadNumber {
        &self * &o
    }
}

impl Neg for QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> QuadNumber {
        QuadNumber::new(-self.a, -self.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> QuadNumber {
        QuadNumber::new(rat(a), rat(b))
    }

    #[test]
    fn unit_w() {
        let w = QuadNumber::w();
        assert_eq!(&w * &w.conj(), QuadNumber::one());
        assert_eq!(&w + &w.inverse().unwrap(), QuadNumber::from_int(18));
        assert_eq!(&w * &w, q(161, 18));
    }

    #[test]
    fn powers() {
        let w = QuadNumber::w();
        assert_eq!(w.pow(0).unwrap(), QuadNumber::one());
        assert_eq!(w.pow(-1).unwrap(), q(9, -1));
        assert_eq!(w.pow(2).unwrap(), q(161, 18));
        assert_eq!(QuadNumber::zero().pow(-1), Err(ArithError::ZeroInverse));
        assert_eq!(QuadNumber::zero().pow(0).unwrap(), QuadNumber::one());
    }

    #[test]
    fn integrality() {
        // (13w + 63)/40 + (−13w + 297)/40 = 9
        let w = QuadNumber::w();
        let x = (&w.scale(&rat(13)) + &QuadNumber::from_int(63)).scale(&rat_frac(1, 40));
        let y = (&w.scale(&rat(-13)) + &QuadNumber::from_int(297)).scale(&rat_frac(1, 40));
        assert_eq!((&x + &y).as_integer(), Some(9.into()));
        assert_eq!(QuadNumber::sqrt80().as_integer(), None);
        assert_eq!(QuadNumber::from_rational(rat_frac(3, 2)).as_integer(), None);
    }

    #[test]
    fn w_power_inverse_pairs() {
        let w = QuadNumber::w();
        for e in -64..=64 {
            assert_eq!(&w.pow(e).unwrap() * &w.pow(-e).unwrap(), QuadNumber::one());
        }
    }

    fn small_quad() -> impl Strategy<Value = QuadNumber> {
        (-50i64..50, 1i64..9, -50i64..50, 1i64..9)
            .prop_map(|(a, da, b, db)| QuadNumber::new(rat_frac(a, da), rat_frac(b, db)))
    }

    proptest! {
        #[test]
        fn conj_is_multiplicative(x in small_quad(), y in small_quad()) {
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        }

        #[test]
        fn norm_is_rational_product(x in small_quad()) {
            let p = &x * &x.conj();
            prop_assert_eq!(p.b, Rational::zero());
            prop_assert_eq!(p.a, x.norm());
        }
    }
}
