//! Exact rational numbers in reports: serialized as "p" or "p/q" strings so
//! JSON stays lossless and byte-deterministic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};
use std::str::FromStr;

/// "p" for integers, "p/q" otherwise, with q > 0 and the fraction reduced.
pub fn to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses "p" or "p/q"; the denominator must be positive after reduction.
pub fn parse(s: &str) -> Result<BigRational, String> {
    let mk_int = |t: &str| BigInt::from_str(t).map_err(|e| format!("bad integer '{t}': {e}"));
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(mk_int(s.trim())?)),
        Some((num, den)) => {
            let d = mk_int(den.trim())?;
            if d == BigInt::from(0) {
                return Err(format!("zero denominator in '{s}'"));
            }
            Ok(BigRational::new(mk_int(num.trim())?, d))
        }
    }
}

pub fn serialize<S: Serializer>(r: &BigRational, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&to_string(r))
}

pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigRational, D::Error> {
    let s = String::deserialize(de)?;
    parse(&s).map_err(D::Error::custom)
}

pub mod opt {
    use super::*;
    use serde::ser::Serialize as _;

    pub fn serialize<S: Serializer>(r: &Option<BigRational>, ser: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(v) => ser.serialize_str(&super::to_string(v)),
            None => None::<&str>.serialize(ser),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<Option<BigRational>, D::Error> {
        let s = Option::<String>::deserialize(de)?;
        s.map(|v| super::parse(&v).map_err(D::Error::custom)).transpose()
    }
}

/// Vectors of rationals as arrays of "p/q" strings.
pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigRational], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&super::to_string(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<BigRational>, D::Error> {
        let raw = Vec::<String>::deserialize(de)?;
        raw.iter()
            .map(|s| super::parse(s).map_err(D::Error::custom))
            .collect()
    }
}

/// Vectors of arbitrary-precision integers as arrays of JSON numbers.
pub mod bigint_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigInt], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&serde_json::Number::from_string_unchecked(x.to_string()))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<serde_json::Number>::deserialize(de)?;
        raw.iter()
            .map(|n| BigInt::from_str(&n.to_string()).map_err(D::Error::custom))
            .collect()
    }
}

/// Arbitrary-precision integers as honest JSON numbers.
pub mod bigint {
    use super::*;
    use serde::ser::Serialize as _;

    pub fn serialize<S: Serializer>(v: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
        serde_json::Number::from_string_unchecked(v.to_string()).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
        let n = serde_json::Number::deserialize(de)?;
        BigInt::from_str(&n.to_string()).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_and_fraction_forms() {
        let two = BigRational::from_integer(2.into());
        assert_eq!(to_string(&two), "2");
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(to_string(&half), "1/2");
        let neg = BigRational::new((-3).into(), 4.into());
        assert_eq!(to_string(&neg), "-3/4");
    }

    #[test]
    fn parse_roundtrip_and_reduction() {
        assert_eq!(parse("6/4").unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(parse("-5").unwrap(), BigRational::from_integer((-5).into()));
        assert_eq!(parse("1/-2").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        for s in ["0", "7", "-2/9", "22/7"] {
            assert_eq!(to_string(&parse(s).unwrap()), s);
        }
    }
}
