//! Small helpers for exact rational bookkeeping and deterministic rendering.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// `base^exp` as an unbounded integer.
pub fn upow(base: u64, exp: u32) -> BigUint {
    BigUint::from(base).pow(exp)
}

/// `base^exp` as a signed unbounded integer.
pub fn ipow(base: u64, exp: u32) -> BigInt {
    BigInt::from(base).pow(exp)
}

/// Exact rational `num / den` from unbounded integers.
pub fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Deterministic decimal rendering of an exact rational, truncated toward
/// zero at `digits` places. Never goes through floating point.
pub fn decimal_string(r: &BigRational, digits: u32) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    let scale = BigInt::from(10u8).pow(digits);
    let scaled = (abs.numer() * &scale) / abs.denom();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{frac_part:0>width$}", width = digits as usize)
}

/// `value / expected`, or None when the denominator is zero.
pub fn checked_ratio(value: &BigRational, expected: &BigRational) -> Option<BigRational> {
    if expected.is_zero() {
        None
    } else {
        Some(value / expected)
    }
}
