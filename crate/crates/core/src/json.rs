//! JSON helpers shared by every serialized payload.
//!
//! Every document carries a top-level `"schema"` string. Integers whose
//! magnitude exceeds `2^53 - 1` are written as decimal strings so that
//! consumers using IEEE doubles never lose precision; readers accept both.

use serde_json::Value;

pub const MAX_SAFE_INT: i64 = (1 << 53) - 1;

pub const SCHEMA_TWIST_WORD: &str = "twistcalc/twist-word/v1";
pub const SCHEMA_FAMILY: &str = "twistcalc/family-report/v1";
pub const SCHEMA_TABLE: &str = "twistcalc/family-table/v1";
pub const SCHEMA_FACTORIZATION: &str = "twistcalc/factorization/v1";
pub const SCHEMA_FIBRATION: &str = "twistcalc/lefschetz-fibration/v1";
pub const SCHEMA_SPINAL_BOOK: &str = "twistcalc/spinal-open-book/v1";
pub const SCHEMA_TAP_SPEC: &str = "twistcalc/tap-spec/v1";
pub const SCHEMA_TAP_RESULT: &str = "twistcalc/tap-result/v1";
pub const SCHEMA_PLUMBING: &str = "twistcalc/plumbing-graph/v1";
pub const SCHEMA_VERDICT: &str = "twistcalc/verdict/v1";

/// An integer as a JSON value, stringified beyond the safe range.
pub fn int(x: i64) -> Value {
    if (-MAX_SAFE_INT..=MAX_SAFE_INT).contains(&x) {
        Value::from(x)
    } else {
        Value::String(x.to_string())
    }
}

pub fn uint(x: u64) -> Value {
    if x <= MAX_SAFE_INT as u64 {
        Value::from(x)
    } else {
        Value::String(x.to_string())
    }
}

/// Wraps a payload object with its schema tag.
pub fn tagged(schema: &str, payload: Value) -> Value {
    let mut map = match payload {
        Value::Object(m) => m,
        other => {
            let mut m = serde_json::Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    map.insert("schema".into(), Value::String(schema.into()));
    Value::Object(map)
}

/// Replaces every integer outside the safe range by its decimal string.
pub fn stringify_large(v: Value) -> Value {
    match v {
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(x), _) => int(x),
            (None, Some(x)) => uint(x),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_large).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, stringify_large(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with sorted keys, safe integers and a trailing newline.
pub fn to_stable_string(v: &Value) -> String {
    let v = stringify_large(v.clone());
    let mut s = serde_json::to_string_pretty(&v).expect("serializing a JSON value cannot fail");
    s.push('\n');
    s
}

/// `#[serde(with = "safe_int")]` for `i64` fields.
pub mod safe_int {
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};
    use std::fmt;

    use super::MAX_SAFE_INT;

    pub fn serialize<S: Serializer>(x: &i64, s: S) -> Result<S::Ok, S::Error> {
        if (-MAX_SAFE_INT..=MAX_SAFE_INT).contains(x) {
            s.serialize_i64(*x)
        } else {
            s.serialize_str(&x.to_string())
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<i64, D::Error> {
        struct IntVisitor;

        impl Visitor<'_> for IntVisitor {
            type Value = i64;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<i64, E> {
                Ok(v)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<i64, E> {
                i64::try_from(v).map_err(E::custom)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<i64, E> {
                v.trim().parse().map_err(E::custom)
            }
        }

        d.deserialize_any(IntVisitor)
    }
}
