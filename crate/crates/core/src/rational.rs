//! Exact rationals and the `[num, den]` / `num/den` encodings used in files
//! and on the command line.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// `base^exp` for a nonnegative integer exponent.
pub fn pow(base: &Rational, exp: usize) -> Rational {
    let mut acc = one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Parses `num/den` or a bare integer. Decimal points are rejected.
pub fn parse(text: &str) -> Result<Rational> {
    let bad = || Error::BadRational(text.to_string());
    let t = text.trim();
    if t.contains('.') || t.contains('e') || t.contains('E') {
        return Err(bad());
    }
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// `num/den` in lowest terms, or just `num` when the denominator is 1.
pub fn display(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn big_to_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => Value::from(i),
        None => Value::from(v.to_string()),
    }
}

fn json_to_big(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).or_else(|| n.as_u64().map(BigInt::from)),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

/// `[num, den]`, with components that overflow `i64` written as decimal strings.
pub fn to_json(r: &Rational) -> Value {
    Value::Array(vec![big_to_json(r.numer()), big_to_json(r.denom())])
}

pub fn from_json(v: &Value) -> Option<Rational> {
    let arr = v.as_array()?;
    if arr.len() != 2 {
        return None;
    }
    let n = json_to_big(&arr[0])?;
    let d = json_to_big(&arr[1])?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn is_probability(r: &Rational) -> bool {
    !r.is_negative() && r <= &one()
}

pub mod serde_pair {
    //! `#[serde(with = ...)]` adapter for `[num, den]`.
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};
    use serde_json::Value;

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&super::to_json(r), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let v = Value::deserialize(d)?;
        super::from_json(&v).ok_or_else(|| D::Error::custom("expected [num, den] with den != 0"))
    }
}
