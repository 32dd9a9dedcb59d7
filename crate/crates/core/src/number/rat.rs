//! Small helpers over `BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn signum(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn midpoint(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) / int(2)
}

/// `2^-k`.
pub fn pow2_inv(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << k)
}

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"1.2"`.
pub fn parse(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::invalid("", format!("not a rational literal: {text:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::invalid("", format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, fracpart)) = t.split_once('.') {
        if fracpart.is_empty() || !fracpart.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = whole.starts_with('-');
        let w: BigInt = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let f: BigInt = fracpart.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), fracpart.len());
        let mag = BigRational::new(w.abs() * &den + f, den);
        return Ok(if neg { -mag } else { mag });
    }
    let p: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

/// Renders as `"p/q"`, or `"p"` for integers.
pub fn render(x: &BigRational) -> String {
    x.to_string()
}

/// Nearest `f64` (via the exact ratio; fine for reporting).
pub fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // Very large numerator/denominator: scale down by shifting.
        let n = x.numer().bits() as i64;
        let d = x.denom().bits() as i64;
        let shift = n.max(d) - 1000;
        let num = if shift > 0 { x.numer() >> shift as usize } else { x.numer().clone() };
        let den = if shift > 0 { x.denom() >> shift as usize } else { x.denom().clone() };
        num.to_f64().unwrap_or(0.0) / den.to_f64().unwrap_or(1.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_literals() {
        assert_eq!(parse("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse("-2").unwrap(), int(-2));
        assert_eq!(parse("1.2").unwrap(), frac(6, 5));
        assert_eq!(parse("-0.25").unwrap(), frac(-1, 4));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
    }
}
