//! Half-integers stored as twice their value.
//!
//! Text form is `"3/2"`, `"-1/2"`, `"1"`, `"0"`.

use std::fmt::Write;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid half-integer `{0}`")]
pub struct ParseHalfError(pub String);

/// Parses `"n"` or `"n/2"` into twice its value.
pub fn parse_twice(text: &str) -> Result<i64, ParseHalfError> {
    let t = text.trim();
    let err = || ParseHalfError(text.to_string());
    match t.split_once('/') {
        Some((num, den)) => {
            if den.trim() != "2" {
                return Err(err());
            }
            num.trim().parse().map_err(|_| err())
        }
        None => {
            let n: i64 = t.parse().map_err(|_| err())?;
            n.checked_mul(2).ok_or_else(err)
        }
    }
}

pub fn parse_twice_unsigned(text: &str) -> Result<u32, ParseHalfError> {
    let v = parse_twice(text)?;
    u32::try_from(v).map_err(|_| ParseHalfError(text.to_string()))
}

pub fn parse_twice_signed(text: &str) -> Result<i32, ParseHalfError> {
    let v = parse_twice(text)?;
    i32::try_from(v).map_err(|_| ParseHalfError(text.to_string()))
}

pub fn format_twice(twice: i64) -> String {
    let mut s = String::new();
    if twice % 2 == 0 {
        write!(s, "{}", twice / 2).unwrap();
    } else {
        write!(s, "{twice}/2").unwrap();
    }
    s
}

/// `serde(with = ...)` adapter for a non-negative twice-value.
pub mod serde_unsigned {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u32, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_twice(*v as i64))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u32, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_twice_unsigned(&text).map_err(D::Error::custom)
    }
}

/// `serde(with = ...)` adapter for a signed twice-value.
pub mod serde_signed {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &i32, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_twice(*v as i64))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<i32, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_twice_signed(&text).map_err(D::Error::custom)
    }
}
