//! Exact rational helpers shared by every module.
//!
//! Distances on the sequence space are dyadic, weights are arbitrary
//! rationals; everything is carried as [`Ratio`] and only rendered as a
//! decimal at output boundaries.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number used throughout the crate.
pub type Ratio = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRatioError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

pub fn int(n: i64) -> Ratio {
    Ratio::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Ratio {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

/// `2^{-k}`.
pub fn dyadic(k: usize) -> Ratio {
    Ratio::new(BigInt::one(), BigInt::one() << k)
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"0.125"`.
pub fn parse_ratio(s: &str) -> Result<Ratio, ParseRatioError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseRatioError::Empty);
    }
    let bad = || ParseRatioError::Malformed(t.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(ParseRatioError::ZeroDenominator(t.to_string()));
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((whole, fracpart)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.chars().all(|c| c.is_ascii_digit())
            || !fracpart.chars().all(|c| c.is_ascii_digit())
            || (whole_digits.is_empty() && fracpart.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{fracpart}");
        let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fracpart.len());
        let r = Ratio::new(n, d);
        return Ok(if negative { -r } else { r });
    }
    BigInt::from_str(t).map(Ratio::from_integer).map_err(|_| bad())
}

/// Renders the exact value as `p/q` (or `p` for integers).
pub fn ratio_string(r: &Ratio) -> String {
    r.to_string()
}

/// Decimal rendering with 12 significant digits, trailing zeros trimmed and
/// at least one fractional digit (`0.0`, `0.5`, `0.333333333333`).
pub fn decimal(r: &Ratio) -> String {
    decimal_sig(r, 12)
}

pub fn decimal_sig(r: &Ratio, sig: usize) -> String {
    if r.is_zero() {
        return "0.0".to_string();
    }
    let negative = r.is_negative();
    let a = r.abs();
    let ten = BigInt::from(10);
    // exponent e with 10^e <= a < 10^{e+1}
    let mut e: i64 = 0;
    let mut scaled = a.clone();
    while scaled >= Ratio::from_integer(ten.clone()) {
        scaled /= Ratio::from_integer(ten.clone());
        e += 1;
    }
    while scaled < Ratio::one() {
        scaled *= Ratio::from_integer(ten.clone());
        e -= 1;
    }
    // round a * 10^{sig-1-e} to an integer
    let shift = sig as i64 - 1 - e;
    let scaled_int = if shift >= 0 {
        a * Ratio::from_integer(num_traits::pow(ten.clone(), shift as usize))
    } else {
        a / Ratio::from_integer(num_traits::pow(ten.clone(), (-shift) as usize))
    };
    let rounded = round_half_up(&scaled_int);
    let mut digits = rounded.to_string();
    let mut shift = shift;
    if digits.len() > sig {
        // rounding carried into a new digit
        digits.pop();
        shift -= 1;
    }
    let body = if shift <= 0 {
        let zeros = "0".repeat((-shift) as usize);
        format!("{digits}{zeros}.0")
    } else {
        let shift = shift as usize;
        if digits.len() > shift {
            let (i, f) = digits.split_at(digits.len() - shift);
            trim_fraction(format!("{i}.{f}"))
        } else {
            let zeros = "0".repeat(shift - digits.len());
            trim_fraction(format!("0.{zeros}{digits}"))
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn trim_fraction(s: String) -> String {
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

fn round_half_up(r: &Ratio) -> BigInt {
    let (q, rem) = r.numer().div_rem(r.denom());
    if rem.clone() * BigInt::from(2) >= r.denom().clone() {
        q + 1
    } else {
        q
    }
}

pub fn to_f64(r: &Ratio) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Ratio>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Numerator of `r` over the common denominator `d` (which must be a
/// multiple of `r.denom()`), as an unsigned integer.
pub fn scaled_numerator(r: &Ratio, d: &BigInt) -> BigUint {
    let n = r.numer() * (d / r.denom());
    n.to_biguint().expect("nonnegative weight")
}

/// Smallest integer `>= r`.
pub fn ceil_to_usize(r: &Ratio) -> Option<usize> {
    r.ceil().to_integer().to_usize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_ratio("1/3").unwrap(), frac(1, 3));
        assert_eq!(parse_ratio(" 4 ").unwrap(), int(4));
        assert_eq!(parse_ratio("0.125").unwrap(), frac(1, 8));
        assert_eq!(parse_ratio("-2/4").unwrap(), frac(-1, 2));
        assert!(matches!(parse_ratio("1/0"), Err(ParseRatioError::ZeroDenominator(_))));
        assert!(parse_ratio("x").is_err());
        assert!(parse_ratio("").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&int(0)), "0.0");
        assert_eq!(decimal(&int(1)), "1.0");
        assert_eq!(decimal(&frac(1, 2)), "0.5");
        assert_eq!(decimal(&frac(1, 3)), "0.333333333333");
        assert_eq!(decimal(&frac(2, 3)), "0.666666666667");
        assert_eq!(decimal(&frac(1, 1024)), "0.0009765625");
        assert_eq!(decimal(&frac(123456789, 1)), "123456789.0");
        assert_eq!(decimal(&frac(-1, 8)), "-0.125");
        assert_eq!(decimal(&frac(9_999_999_999_999, 10_000_000_000_000)), "1.0");
    }

    #[test]
    fn dyadic_values() {
        assert_eq!(dyadic(0), int(1));
        assert_eq!(dyadic(3), frac(1, 8));
    }
}
