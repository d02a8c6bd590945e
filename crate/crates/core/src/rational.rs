//! Exact rational arithmetic and the canonical `"p/q"` wire format.
//!
//! Everything in this crate that carries a numeric value is a [`Rat`]
//! (arbitrary-precision rational). The serialization boundary mandates a
//! canonical form: lowest terms, positive denominator, rendered `"p"` for
//! integers and `"p/q"` otherwise.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat_u64(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: u64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// 2^e as an exact rational; `e` may be negative.
pub fn pow2(e: i64) -> Rat {
    let unit = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rat::from_integer(unit)
    } else {
        Rat::new(BigInt::one(), unit)
    }
}

/// Canonical rendering: `BigRational` is already reduced with a positive
/// denominator, so this only picks between `p` and `p/q`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q`, or a plain decimal like `0.25` into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::InvalidSpec(format!("malformed rational {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().map_err(|_| bad())?;
        let den: BigInt = q.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::InvalidSpec(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let den = BigInt::from(10u8).pow(frac.len() as u32);
        let frac_rat = Rat::new(frac_num, den);
        let int_rat = Rat::from_integer(int_part);
        return Ok(if negative { int_rat - frac_rat } else { int_rat + frac_rat });
    }
    let num: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(num))
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

/// Serde adapter serializing a [`Rat`] through its canonical string form.
pub mod rat_string {
    use super::{format_rat, parse_rat, Rat};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rat(&raw).map_err(de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rat>` rendered as an array of canonical strings.
pub mod rat_vec {
    use super::{format_rat, parse_rat, Rat};
    use serde::{de, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(vals: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(vals.len()))?;
        for v in vals {
            seq.serialize_element(&format_rat(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rat>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|v| parse_rat(v).map_err(de::Error::custom))
            .collect()
    }
}

/// Serialize-only adapter for optional numeric traces.
pub mod opt_rat_pairs {
    use super::{rat_pairs, Rat};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(
        entries: &Option<Vec<(u64, Rat)>>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        // Paired with skip_serializing_if, so the value is always present.
        rat_pairs::serialize(entries.as_ref().expect("skipped when None"), s)
    }
}

/// Serde adapter for a list of finite-support vectors.
pub mod rat_pairs_nested {
    use super::{format_rat, parse_rat, Rat};
    use serde::{de, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        elements: &[Vec<(u64, Rat)>],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(elements.len()))?;
        for el in elements {
            let rendered: Vec<(u64, String)> =
                el.iter().map(|(n, v)| (*n, format_rat(v))).collect();
            seq.serialize_element(&rendered)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<(u64, Rat)>>, D::Error> {
        let raw: Vec<Vec<(u64, String)>> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|el| {
                el.into_iter()
                    .map(|(n, v)| parse_rat(&v).map(|r| (n, r)).map_err(de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Serde adapter for `(index, value)` support entries, rendered `[n, "p/q"]`.
pub mod rat_pairs {
    use super::{format_rat, parse_rat, Rat};
    use serde::{de, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        entries: &[(u64, Rat)],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(entries.len()))?;
        for (n, v) in entries {
            seq.serialize_element(&(*n, format_rat(v)))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<(u64, Rat)>, D::Error> {
        let raw: Vec<(u64, String)> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|(n, v)| parse_rat(&v).map(|r| (n, r)).map_err(de::Error::custom))
            .collect()
    }
}
