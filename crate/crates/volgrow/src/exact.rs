//! Exact integer/rational helpers and string-based serde.
//!
//! All certificates and witness lists in this crate are exact: sequence
//! arithmetic uses unbounded integers and ratios use rationals. JSON carries
//! them as decimal strings (`"123"`) and fraction strings (`"101/51"`) so
//! values survive round-trips without precision loss.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

/// Parse `"p"` or `"p/q"` into an exact rational.
pub fn parse_ratio(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|e| e.to_string())?;
            let q = BigInt::from_str(q.trim()).map_err(|e| e.to_string())?;
            if q.is_zero() {
                return Err("zero denominator".to_string());
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p = BigInt::from_str(s).map_err(|e| e.to_string())?;
            Ok(BigRational::from_integer(p))
        }
    }
}

/// Render a rational as `"p"` (integral) or `"p/q"`.
pub fn ratio_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal approximation of a rational for plot-ready CSV columns.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled division when numer/denom exceed f64 range.
        let scale = BigInt::from(1u64 << 53);
        let scaled = (r * BigRational::from_integer(scale.clone()))
            .to_integer()
            .to_f64()
            .unwrap_or(f64::INFINITY);
        scaled / (1u64 << 53) as f64
    })
}

pub fn big_to_f64(n: &BigInt) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY)
}

/// Natural log of a positive big integer, stable for values beyond f64 range.
pub fn big_ln(n: &BigInt) -> f64 {
    debug_assert!(n.is_positive());
    let bits = n.bits();
    if bits <= 52 {
        return big_to_f64(n).ln();
    }
    let shift = bits - 52;
    let head = (n >> shift).to_f64().unwrap_or(f64::MAX);
    head.ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Ceiling of a/b for positive big integers.
pub fn div_ceil_big(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if r.is_zero() || a.is_negative() {
        q
    } else {
        q + BigInt::one()
    }
}

/// Serde adapter: `BigInt` as a decimal string.
pub mod serde_bigint {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(de)?;
        BigInt::from_str(s.trim()).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: `Vec<BigInt>` as decimal strings.
pub mod serde_vec_bigint {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(de)?;
        raw.iter()
            .map(|s| BigInt::from_str(s.trim()).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter: `BigRational` as `"p/q"`.
pub mod serde_ratio {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&ratio_to_string(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(de)?;
        parse_ratio(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: `Vec<BigRational>` as `"p/q"` strings.
pub mod serde_vec_ratio {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(v.iter().map(ratio_to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<BigRational>, D::Error> {
        let raw = Vec::<String>::deserialize(de)?;
        raw.iter()
            .map(|s| parse_ratio(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter: `Option<BigRational>` as `"p/q"` or null.
pub mod serde_opt_ratio {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigRational>, ser: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => ser.serialize_some(&ratio_to_string(r)),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<Option<BigRational>, D::Error> {
        let raw = Option::<String>::deserialize(de)?;
        raw.map(|s| parse_ratio(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    #[test]
    fn ratio_round_trip() {
        for s in ["101/51", "-3/7", "42", "0"] {
            let r = parse_ratio(s).unwrap();
            assert_eq!(ratio_to_string(&r), s);
        }
    }

    #[test]
    fn ratio_normalizes() {
        assert_eq!(ratio_to_string(&parse_ratio("4/2").unwrap()), "2");
        assert_eq!(ratio_to_string(&parse_ratio("6/4").unwrap()), "3/2");
    }

    #[test]
    fn big_ln_matches_f64_in_range() {
        let n = BigInt::from_u64(1_000_003).unwrap();
        assert!((big_ln(&n) - 1_000_003f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn big_ln_huge() {
        let n = BigInt::from(2u8).pow(400);
        let expect = 400.0 * std::f64::consts::LN_2;
        assert!((big_ln(&n) - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn div_ceil_rounds_up() {
        assert_eq!(
            div_ceil_big(&BigInt::from(7), &BigInt::from(2)),
            BigInt::from(4)
        );
        assert_eq!(
            div_ceil_big(&BigInt::from(8), &BigInt::from(2)),
            BigInt::from(4)
        );
    }
}
