//! Exact integer and rational helpers used for every threshold comparison.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(n.into())
}

pub fn uint(n: u128) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn big(n: &BigUint) -> Rational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// `C(n, k)` as an exact big integer (zero when `k > n`).
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` when it fits in a `u128`.
pub fn binom_u128(n: u64, k: u64) -> Option<u128> {
    binom(n, k).to_u128()
}

pub fn binom_rat(n: u64, k: u64) -> Rational {
    big(&binom(n, k))
}

/// `base^exp` for a possibly negative integer exponent.
pub fn powi(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

pub fn floor_u64(r: &Rational) -> u64 {
    if r.is_negative() {
        return 0;
    }
    r.floor().to_integer().to_u64().unwrap_or(u64::MAX)
}

pub fn ceil_u64(r: &Rational) -> u64 {
    if r.is_negative() {
        return 0;
    }
    r.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Best rational approximation of a finite float, exact for dyadic values.
pub fn from_f64(x: f64) -> Result<Rational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::DegenerateInput(format!("{x} is not a finite number")))
}

/// Parses `"3/4"`, `"7"`, or a decimal such as `"0.55"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::DegenerateInput(format!("cannot parse rational from {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches('-'), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Formats as `"num/den"` (denominator always present).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Checks `0 < r <= 1`.
pub fn check_unit_interval(name: &str, r: &Rational) -> Result<()> {
    if !r.is_positive() || *r > Rational::one() {
        return Err(Error::DegenerateInput(format!(
            "{name} = {} must lie in (0, 1]",
            format_rational(r)
        )));
    }
    Ok(())
}

/// Checks `0 <= r <= 1`.
pub fn check_probability(name: &str, r: &Rational) -> Result<()> {
    if r.is_negative() || *r > Rational::one() {
        return Err(Error::DegenerateInput(format!(
            "{name} = {} must lie in [0, 1]",
            format_rational(r)
        )));
    }
    Ok(())
}
