//! JSON helpers shared by the report types.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::Value;

use crate::lattice::{IVec2, IVec3};

/// A JSON number when the value fits in `i64`, otherwise a decimal string.
pub fn int_value(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => Value::from(i),
        None => Value::String(v.to_string()),
    }
}

pub fn vec2_value(p: &IVec2) -> Value {
    Value::Array(vec![int_value(&p.x), int_value(&p.y)])
}

pub fn vec3_value(p: &IVec3) -> Value {
    Value::Array(vec![int_value(&p.x), int_value(&p.y), int_value(&p.z)])
}
