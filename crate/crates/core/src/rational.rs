//! Exact rational arithmetic for weight bookkeeping.
//!
//! Weight updates multiply by 2, 1/2, 3/2, 7/4 and friends, and the potential
//! inequality must be checked exactly, so floating point is banned from all
//! weight logic. The carrier is `num_rational::BigRational` (always reduced,
//! positive denominator); this module adds the handful of operations the
//! generators need, most notably an exact floor of the base-2 logarithm.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Sub};

/// An exact rational number. Always reduced, denominator always positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_u64(n: u64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`, reduced. Panics if `den == 0`.
    pub fn ratio(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn exact_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn double(&self) -> Self {
        Rational(&self.0 * BigInt::from(2))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Exact `floor(log2(self))` for positive values, via bit lengths.
    ///
    /// For `p/q > 0` the answer `k` satisfies `2^k <= p/q < 2^(k+1)`. Bit
    /// lengths give a candidate within one, which a single shift-compare
    /// fixes up. Returns `None` for zero or negative values.
    pub fn floor_log2(&self) -> Option<i64> {
        if !self.0.is_positive() {
            return None;
        }
        let p = self.0.numer().magnitude();
        let q = self.0.denom().magnitude();
        let mut k = p.bits() as i64 - q.bits() as i64;
        // 2^k <= p/q  <=>  (k >= 0 ? q << k <= p : p << -k >= q)
        let le = |k: i64| -> bool {
            if k >= 0 {
                (q << (k as u64)) <= *p
            } else {
                (p << ((-k) as u64)) >= *q
            }
        };
        if !le(k) {
            k -= 1;
        }
        debug_assert!(le(k) && !le(k + 1));
        Some(k)
    }

    /// Value as `f64`, for display only.
    pub fn to_f64(&self) -> f64 {
        let p = big_to_f64(self.0.numer());
        let q = big_to_f64(self.0.denom());
        p / q
    }

    /// Exact non-negative integer power.
    pub fn pow(&self, exp: u32) -> Self {
        let mut out = Rational::one();
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    /// Scaled numerator once the value is brought onto denominator `common`,
    /// which must be a multiple of `self.denom()`. Requires `self >= 0`.
    pub(crate) fn scaled_numer(&self, common: &BigUint) -> BigUint {
        assert!(!self.0.is_negative());
        let den = self.0.denom().magnitude();
        let num = self.0.numer().magnitude();
        num * (common / den)
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    let mag = x.magnitude();
    let bits = mag.bits();
    let val = if bits <= 52 {
        mag.to_u64_digits().first().copied().unwrap_or(0) as f64
    } else {
        // keep the top 52 bits and scale back up
        let shift = bits - 52;
        let top = mag >> shift;
        let lead = top.to_u64_digits().first().copied().unwrap_or(0) as f64;
        lead * 2f64.powi(shift as i32)
    };
    match x.sign() {
        Sign::Minus => -val,
        _ => val,
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational(&self.0 - &rhs.0)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational(&self.0 * &rhs.0)
    }
}

impl Div for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        Rational(&self.0 / &rhs.0)
    }
}

/// Least common multiple of denominators, for subset-sum normalization.
pub(crate) fn denom_lcm<'a>(values: impl Iterator<Item = &'a Rational>) -> BigUint {
    let mut acc = BigUint::one();
    for v in values {
        acc = num_integer::lcm(acc, v.denom().magnitude().clone());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_reduces() {
        assert_eq!(Rational::ratio(4, 6), Rational::ratio(2, 3));
        assert_eq!(
            Rational::ratio(1644934, 1000000),
            Rational::ratio(822467, 500000)
        );
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = Rational::ratio(1, 3);
        let b = Rational::ratio(1, 6);
        assert_eq!(&a + &b, Rational::ratio(1, 2));
        assert_eq!(&a * &b, Rational::ratio(1, 18));
        assert_eq!(&a / &b, Rational::from_u64(2));
        assert_eq!(&a - &b, b);
        assert_eq!(Rational::ratio(3, 4).double(), Rational::ratio(3, 2));
    }

    #[test]
    fn floor_log2_powers_and_nearby() {
        assert_eq!(Rational::from_u64(1).floor_log2(), Some(0));
        assert_eq!(Rational::from_u64(2).floor_log2(), Some(1));
        assert_eq!(Rational::from_u64(8).floor_log2(), Some(3));
        assert_eq!(Rational::from_u64(7).floor_log2(), Some(2));
        assert_eq!(Rational::from_u64(9).floor_log2(), Some(3));
        assert_eq!(Rational::ratio(1, 2).floor_log2(), Some(-1));
        assert_eq!(Rational::ratio(1, 3).floor_log2(), Some(-2));
        assert_eq!(Rational::ratio(3, 2).floor_log2(), Some(0));
        // the shipped over-approximation of pi^2/6
        assert_eq!(Rational::ratio(1644934, 1000000).floor_log2(), Some(0));
        // W / w0(2) = 1.644934 * 4
        assert_eq!(Rational::ratio(1644934 * 4, 1000000).floor_log2(), Some(2));
        assert_eq!(Rational::zero().floor_log2(), None);
    }

    #[test]
    fn scaled_numer_matches_value() {
        let vals = [
            Rational::ratio(1, 4),
            Rational::ratio(3, 2),
            Rational::from_u64(5),
        ];
        let common = denom_lcm(vals.iter());
        assert_eq!(common, BigUint::from(4u32));
        let scaled: Vec<BigUint> = vals.iter().map(|v| v.scaled_numer(&common)).collect();
        assert_eq!(
            scaled,
            vec![
                BigUint::from(1u32),
                BigUint::from(6u32),
                BigUint::from(20u32)
            ]
        );
    }
}
