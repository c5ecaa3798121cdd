//! Exact rational and Gaussian-rational scalars.
//!
//! Everything that decides stratum membership runs on these types: a
//! coordinate is zero or it is not, with no tolerance involved.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-7/4"`, `"0.0625"` or `"1.5e-3"` into an exact rational.
pub fn parse_q(text: &str) -> Result<Q> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".to_string()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Q::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("no digits in {s:?}")));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a decimal number: {s:?}")));
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer = if all.is_empty() { BigInt::zero() } else { BigInt::from_str(&all).unwrap() };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Q::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Q::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Decimal rendering when the expansion terminates, `p/q` otherwise.
pub fn format_q(value: &Q) -> String {
    let mut den = value.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return value.numer().to_string();
    }
    let scaled = value * Q::from_integer(num_traits::pow(BigInt::from(10), digits));
    let n = scaled.to_integer();
    let negative = n.is_negative();
    let s = n.abs().to_string();
    let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
    let (int_part, frac_part) = s.split_at(s.len() - digits);
    let frac_part = frac_part.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

pub fn q_to_f64(value: &Q) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter: rationals travel as strings so nothing is rounded.
pub mod q_string {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let raw = serde_json::Value::deserialize(d)?;
        value_to_q(&raw).map_err(serde::de::Error::custom)
    }

    pub(crate) fn value_to_q(raw: &serde_json::Value) -> std::result::Result<Q, String> {
        match raw {
            serde_json::Value::String(s) => parse_q(s).map_err(|e| e.to_string()),
            serde_json::Value::Number(n) => parse_q(&n.to_string()).map_err(|e| e.to_string()),
            other => Err(format!("expected a number or numeric string, got {other}")),
        }
    }
}

pub mod q_vec_string {
    use super::*;

    pub fn serialize<S: Serializer>(values: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = values.iter().map(format_q).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(d)?;
        raw.iter()
            .map(|v| q_string::value_to_q(v).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// An element of Q(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Q,
    pub im: Q,
}

impl GaussianRational {
    pub fn new(re: Q, im: Q) -> Self {
        Self { re, im }
    }

    pub fn real(re: Q) -> Self {
        Self { re, im: <Q as Zero>::zero() }
    }

    pub fn zero() -> Self {
        Self::real(<Q as Zero>::zero())
    }

    pub fn one() -> Self {
        Self::real(<Q as One>::one())
    }

    pub fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// |z|^2, exact.
    pub fn norm_sqr(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if Zero::is_zero(&n) {
            return None;
        }
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|inv| self * &inv)
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }

    /// Parses `re,im` (either part decimal or fraction); a bare number is real.
    pub fn parse(text: &str) -> Result<Self> {
        match text.split_once(',') {
            Some((re, im)) => Ok(Self::new(parse_q(re)?, parse_q(im)?)),
            None => Ok(Self::real(parse_q(text)?)),
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = format_q(&self.re);
        if self.im.is_negative() {
            write!(f, "{re}-{}i", format_q(&-self.im.clone()))
        } else {
            write!(f, "{re}+{}i", format_q(&self.im))
        }
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: Self) -> GaussianRational {
        self.checked_div(rhs).expect("division by zero Gaussian rational")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [format_q(&self.re), format_q(&self.im)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = <[serde_json::Value; 2]>::deserialize(d)?;
        let re = q_string::value_to_q(&raw[0]).map_err(serde::de::Error::custom)?;
        let im = q_string::value_to_q(&raw[1]).map_err(serde::de::Error::custom)?;
        Ok(Self::new(re, im))
    }
}

/// Exact field operations shared by Q and Q(i).
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Panics on division by zero; callers test `is_zero` first.
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
}

impl Scalar for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
}

impl Scalar for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }
}
