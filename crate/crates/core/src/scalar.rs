//! Exact rational scalars.

use alloc::string::String;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary precision rational number, always kept in lowest terms.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// `(-1)^n` as a scalar.
pub fn sign_pow(n: i64) -> Scalar {
    if is_odd(n) {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

#[inline]
pub fn is_odd(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

/// Koszul sign `(-1)^{ab}` reported as "is negative".
#[inline]
pub fn koszul_negative(a: i64, b: i64) -> bool {
    is_odd(a) && is_odd(b)
}

/// Renders `p/q`, or `p` for integers.
pub fn format(s: &Scalar) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    if s.is_integer() {
        let _ = write!(out, "{}", s.numer());
    } else {
        let _ = write!(out, "{}/{}", s.numer(), s.denom());
    }
    out
}

/// Parses `p`, `-p`, `p/q`.
pub fn parse(text: &str) -> Option<Scalar> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Scalar::new(n, d))
    } else {
        BigInt::from_str(text).ok().map(Scalar::from_integer)
    }
}
