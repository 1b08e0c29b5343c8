//! Versioned JSON reports. Field order is fixed by the struct so identical
//! inputs serialize byte-identically; `timing_ms` is the one field allowed
//! to vary between runs and always sits last.

use charsub_core::circle::{point_literal, CirclePoint};
use charsub_core::dyadic::RatInterval;
use charsub_core::finabel::Subgroup;
use charsub_core::Rat;
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: String,
    /// resolved input bindings, flags folded in
    pub spec: BTreeMap<String, String>,
    /// properties the tool relies on but does not verify
    pub asserted: Vec<String>,
    pub result: Value,
    pub exit_code: i32,
    pub timing_ms: u128,
}

impl Report {
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Exact integers as decimal strings: JSON numbers would silently lose
/// anything past 2^53 in downstream tooling.
pub fn big(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

pub fn ratv(r: &Rat) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

pub fn pointv(x: &CirclePoint) -> Value {
    Value::String(point_literal(x))
}

pub fn intervalv(i: &RatInterval) -> Value {
    json!({ "lo": ratv(&i.lo), "hi": ratv(&i.hi) })
}

pub fn subgroupv(s: &Subgroup) -> Value {
    let elements = if s.order() <= 64 {
        let elems = s
            .elements()
            .expect("small subgroup enumerates")
            .into_iter()
            .map(|e| Value::Array(e.coords.into_iter().map(|c| json!(c)).collect()))
            .collect();
        Some(Value::Array(elems))
    } else {
        None
    };
    let mut v = json!({
        "ambient_factors": s.ambient().factors(),
        "basis": s.basis(),
        "order": s.order().to_string(),
    });
    if let Some(e) = elements {
        v["elements"] = e;
    }
    v
}
