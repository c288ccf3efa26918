//! Arbitrary-precision rationals used for weights, probabilities and exact
//! coefficients.

use alloc::string::ToString;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{bail, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fallback for ratios whose parts overflow f64 individually.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

/// Parses `a`, `-a` or `a/b`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = match n.parse() {
        Ok(v) => v,
        Err(_) => bail!(Parse, "bad rational numerator in {s:?}"),
    };
    let d: BigInt = match d.parse() {
        Ok(v) => v,
        Err(_) => bail!(Parse, "bad rational denominator in {s:?}"),
    };
    if d.is_zero() {
        bail!(Parse, "zero denominator in {s:?}");
    }
    Ok(Rational::new(n, d))
}

pub fn format(r: &Rational) -> alloc::string::String {
    r.to_string()
}
