//! Arbitrary precision rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed};

/// Reduced fraction with positive denominator.
pub type Rational = num_rational::BigRational;

/// `n / d` as a reduced rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `(-1)^k` for any integer `k`.
pub fn sign_power(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Converts an integral rational to `i64`, `None` if it is not an integer or
/// does not fit.
pub fn to_i64(r: &Rational) -> Option<i64> {
    if !r.is_integer() {
        return None;
    }
    i64::try_from(r.to_integer()).ok()
}

/// Converts a nonnegative integral rational to `u64`.
pub fn to_u64(r: &Rational) -> Option<u64> {
    if !r.is_integer() || r.is_negative() {
        return None;
    }
    u64::try_from(r.to_integer()).ok()
}

