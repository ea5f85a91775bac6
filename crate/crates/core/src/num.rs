//! Exact rational scalars and vectors.

use std::fmt;
use std::ops::{Deref, DerefMut};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{HyperError, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator/denominator overflow f64 individually; fall back to a scaled division
        let n = q.numer().bits() as i64;
        let d = q.denom().bits() as i64;
        let shift = (n - d).clamp(-1000, 1000);
        let scaled = if shift >= 0 {
            q / Rational::from_integer(BigInt::one() << (shift as usize))
        } else {
            q * Rational::from_integer(BigInt::one() << ((-shift) as usize))
        };
        scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
    })
}

/// Exact binary value of a finite float.
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| HyperError::parse(format!("non-finite value {x}")))
}

/// Nearest rational with the given denominator.
pub fn round_to_grid(x: f64, denom: i64) -> Rational {
    let n = (x * denom as f64).round() as i64;
    ratio(n, denom)
}

/// Parses `"3"`, `"-3/2"` or a decimal such as `"0.125"` / `"1e-3"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(HyperError::parse("empty number"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| HyperError::parse(format!("bad numerator in {s:?}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| HyperError::parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(HyperError::parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || HyperError::parse(format!("not a number: {s:?}"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if neg { -value } else { value })
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// JSON form `{"num": "...", "den": "..."}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalJson {
    fn from(q: &Rational) -> Self {
        RationalJson {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl TryFrom<&RationalJson> for Rational {
    type Error = HyperError;

    fn try_from(j: &RationalJson) -> Result<Rational> {
        let n = BigInt::from_str(&j.num).map_err(|_| HyperError::parse(format!("bad num {:?}", j.num)))?;
        let d = BigInt::from_str(&j.den).map_err(|_| HyperError::parse(format!("bad den {:?}", j.den)))?;
        if d.is_zero() {
            return Err(HyperError::parse("zero denominator"));
        }
        Ok(Rational::new(n, d))
    }
}

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn zeros(n: usize) -> Self {
        RationalVector(vec![Rational::zero(); n])
    }

    pub fn ones(n: usize) -> Self {
        RationalVector(vec![Rational::one(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        RationalVector(xs.iter().map(|&x| rat(x)).collect())
    }

    /// Exact binary expansion of each float coordinate.
    pub fn from_f64s(xs: &[f64]) -> Result<Self> {
        xs.iter().map(|&x| from_f64(x)).collect::<Result<Vec<_>>>().map(RationalVector)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalVector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn parse_list(s: &str) -> Result<Self> {
        s.split(',').map(parse_rational).collect::<Result<Vec<_>>>().map(RationalVector)
    }
}

impl Deref for RationalVector {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl DerefMut for RationalVector {
    fn deref_mut(&mut self) -> &mut [Rational] {
        &mut self.0
    }
}

impl From<Vec<Rational>> for RationalVector {
    fn from(v: Vec<Rational>) -> Self {
        RationalVector(v)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Serializes rationals as strings such as `"3/2"`.
pub fn serialize_vector<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

pub fn serialize_opt_vector<S: serde::Serializer>(
    v: &Option<Vec<Rational>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => serialize_vector(v, s),
        None => s.serialize_none(),
    }
}

pub fn abs_max(xs: &[Rational]) -> Rational {
    xs.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}

pub fn factorial(k: usize) -> Rational {
    Rational::from_integer((1..=k as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
}

pub fn binomial(n: usize, k: usize) -> Rational {
    factorial(n) / (factorial(k) * factorial(n - k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/2").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("-3/6").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse_rational("-2").unwrap(), rat(-2));
        assert_eq!(parse_rational("1e-3").unwrap(), ratio(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), rat(250));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1..2", "--1", "1,2"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn rational_json_roundtrip() {
        let q = ratio(-7, 12);
        let j = RationalJson::from(&q);
        assert_eq!(j.num, "-7");
        assert_eq!(j.den, "12");
        assert_eq!(Rational::try_from(&j).unwrap(), q);
    }

    #[test]
    fn float_conversion_is_exact() {
        let q = from_f64(0.1).unwrap();
        assert_eq!(to_f64(&q), 0.1);
        assert!(from_f64(f64::NAN).is_err());
    }

    #[test]
    fn huge_rationals_convert() {
        let big = Rational::new(BigInt::from(3) << 2000usize, BigInt::from(1) << 2000usize);
        assert_eq!(to_f64(&big), 3.0);
    }
}
