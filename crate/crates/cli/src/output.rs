use serde_json::{json, Value};
use su2n_core::{Rational, TrigPoly};

/// Shortest string that parses back to the same `f64`; exponent form only
/// for very small or very large magnitudes.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn json_opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, json_f64)
}

/// Integers as JSON numbers when they fit, otherwise as a `"num/den"` string.
pub fn json_rational(r: &Rational) -> Value {
    if r.is_integer() {
        if let Ok(i) = i64::try_from(r.to_integer()) {
            return json!(i);
        }
    }
    json!(r.to_string())
}

pub fn json_poly(p: &TrigPoly) -> Value {
    Value::Array(
        p.terms()
            .iter()
            .map(|t| {
                json!({
                    "num": t.coeff.numer().to_string(),
                    "den": t.coeff.denom().to_string(),
                    "a2": t.a.twice(),
                    "b2": t.b.twice(),
                })
            })
            .collect(),
    )
}

pub fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}
