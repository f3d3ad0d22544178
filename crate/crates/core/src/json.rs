//! Arbitrary-precision integers as plain JSON numbers.

use num_bigint::BigInt;
use serde::ser::{Serialize, SerializeSeq, Serializer};

/// Serializes a [`BigInt`] as an unquoted JSON number of any size.
pub struct BigNum<'a>(pub &'a BigInt);

impl Serialize for BigNum<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n: serde_json::Number = self.0.to_string().parse().map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

/// Serializes a slice of [`BigInt`] as a JSON array of numbers.
pub struct BigNums<'a>(pub &'a [BigInt]);

impl Serialize for BigNums<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for x in self.0 {
            seq.serialize_element(&BigNum(x))?;
        }
        seq.end()
    }
}

pub fn big_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.to_string().parse().ok(),
        _ => None,
    }
}
