//! JSON encoding of the scalar types: complex numbers as [re, im] pairs,
//! rationals as "p/q" strings, quadratic extensions as rational triples.

use bethevec::{QuadExt, Weight};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

pub fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn complex_slice(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex(z)).collect())
}

pub fn rational(q: &BigRational) -> Value {
    if q.denom().is_one() {
        Value::String(q.numer().to_string())
    } else {
        Value::String(format!("{}/{}", q.numer(), q.denom()))
    }
}

pub fn rational_slice(qs: &[BigRational]) -> Value {
    Value::Array(qs.iter().map(rational).collect())
}

pub fn quad(x: &QuadExt) -> Value {
    if x.radical_part().is_zero() {
        return rational(x.rational_part());
    }
    json!({
        "rational": rational(x.rational_part()),
        "radical": rational(x.radical_part()),
        "radicand": rational(x.radicand()),
    })
}

pub fn weight(w: &Weight) -> Value {
    match w.to_ints() {
        Some(coords) => json!(coords),
        None => Value::String(w.to_string()),
    }
}

pub fn weight_slice(ws: &[Weight]) -> Value {
    Value::Array(ws.iter().map(weight).collect())
}
