//! Exact rational scalars.
//!
//! Every number in the crate is a [`Scalar`], an arbitrary-precision rational
//! kept in lowest terms with a positive denominator. Text form is `"p/q"`, or
//! `"p"` when the denominator is one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `1 / n!` as an exact scalar.
pub fn inv_factorial(n: usize) -> Scalar {
    Scalar::new(BigInt::one(), factorial(n))
}

pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad(s))?;
            let q: BigInt = q.trim().parse().map_err(|_| bad(s))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Scalar::new(p, q)
        }
        None => Scalar::from_integer(t.parse().map_err(|_| bad(s))?),
    };
    Ok(parsed)
}

fn bad(s: &str) -> Error {
    Error::Parse(format!("not a rational number: {s:?}"))
}

/// `num-rational` already prints `p/q` in lowest terms, or `p` for integers.
pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}

/// Lossy decimal rendering, only used for the CLI's convenience column.
pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn parse_vector(items: &[String]) -> Result<Vec<Scalar>> {
    items.iter().map(|s| parse_scalar(s)).collect()
}

pub fn format_vector(v: &[Scalar]) -> Vec<String> {
    v.iter().map(format_scalar).collect()
}

/// Serde adapters that write scalars as exact rational strings.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        Ok(Parsed::deserialize(d)?.0)
    }

    /// Parses while deserializing, so errors point at the offending string.
    struct Parsed(Scalar);

    impl<'de> Deserialize<'de> for Parsed {
        fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
            let raw = <std::borrow::Cow<'de, str>>::deserialize(d)?;
            parse_scalar(&raw).map(Parsed).map_err(serde::de::Error::custom)
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&format_scalar(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Scalar>, D::Error> {
            let raw = Vec::<Parsed>::deserialize(d)?;
            Ok(raw.into_iter().map(|p| p.0).collect())
        }
    }

    pub mod vec_vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Vec<Scalar>], s: S) -> std::result::Result<S::Ok, S::Error> {
            let raw: Vec<Vec<String>> = v.iter().map(|row| format_vector(row)).collect();
            serde::Serialize::serialize(&raw, s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Vec<Scalar>>, D::Error> {
            let raw = Vec::<Vec<Parsed>>::deserialize(d)?;
            Ok(raw
                .into_iter()
                .map(|row| row.into_iter().map(|p| p.0).collect())
                .collect())
        }
    }
}
