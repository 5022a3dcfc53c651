//! JSON encodings.
//!
//! * scalar: a number (floating mode) or a `"p/q"` string (exact mode);
//! * quaternion: `[a1, a2, a3, a4]`;
//! * matrix: `{"n": rows, "m": cols, "entries": [[q, ...], ...]}`, row-major;
//! * vector: `{"n": len, "entries": [q, ...]}` or a bare array of quaternions;
//! * generator specs: `{"ring": "quat", "n", "A", "hbar"}` and
//!   `{"ring": "complex", "n", "lambda", "B"}`.

use serde_json::{json, Value};

use crate::correspondence::{ComplexGenSpec, QuatGenSpec};
use crate::error::{Error, Result};
use crate::qmatrix::{QMatrix, QVector};
use crate::quaternion::Quaternion;
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

/// Scalars with a JSON representation.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        json!(self)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
            Value::String(s) => Ok(parse_rational(s)?.to_f64()),
            other => Err(Error::Parse(format!("expected a number, found {other}"))),
        }
    }
}

impl JsonScalar for Rational {
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => parse_rational(&n.to_string()),
            other => Err(Error::Parse(format!("expected a rational, found {other}"))),
        }
    }
}

pub fn quaternion_to_json<S: JsonScalar>(q: &Quaternion<S>) -> Value {
    Value::Array(q.to_array().iter().map(JsonScalar::to_json).collect())
}

pub fn quaternion_from_json<S: JsonScalar>(v: &Value) -> Result<Quaternion<S>> {
    let arr =
        v.as_array().filter(|a| a.len() == 4).ok_or_else(|| Error::Parse(format!("expected a 4-array, found {v}")))?;
    Ok(Quaternion::new(S::from_json(&arr[0])?, S::from_json(&arr[1])?, S::from_json(&arr[2])?, S::from_json(&arr[3])?))
}

pub fn matrix_to_json<S: JsonScalar>(m: &QMatrix<S>) -> Value {
    let rows: Vec<Value> =
        m.row_vectors().iter().map(|r| Value::Array(r.iter().map(quaternion_to_json).collect())).collect();
    json!({"n": m.rows(), "m": m.cols(), "entries": rows})
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| Error::Parse(format!("missing field {name:?}")))
}

fn usize_field(v: &Value, name: &str) -> Result<usize> {
    field(v, name)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("field {name:?} must be a non-negative integer")))
}

pub fn matrix_from_json<S: JsonScalar>(v: &Value) -> Result<QMatrix<S>> {
    let rows = field(v, "entries")?
        .as_array()
        .ok_or_else(|| Error::Parse("\"entries\" must be an array of rows".into()))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                .iter()
                .map(quaternion_from_json)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let m = QMatrix::from_rows(rows)?;
    if let Some(n) = v.get("n") {
        if n.as_u64() != Some(m.rows() as u64) {
            return Err(Error::Parse(format!("\"n\" = {n} does not match {} rows", m.rows())));
        }
    }
    if let Some(c) = v.get("m") {
        if c.as_u64() != Some(m.cols() as u64) {
            return Err(Error::Parse(format!("\"m\" = {c} does not match {} columns", m.cols())));
        }
    }
    Ok(m)
}

pub fn vector_to_json<S: JsonScalar>(x: &QVector<S>) -> Value {
    json!({"n": x.len(), "entries": x.entries().iter().map(quaternion_to_json).collect::<Vec<_>>()})
}

pub fn vector_from_json<S: JsonScalar>(v: &Value) -> Result<QVector<S>> {
    let entries = match v {
        Value::Array(_) => v,
        _ => field(v, "entries")?,
    };
    let items = entries.as_array().ok_or_else(|| Error::Parse("vector entries must be an array".into()))?;
    let x = QVector::new(items.iter().map(quaternion_from_json).collect::<Result<Vec<_>>>()?);
    if let Some(n) = v.get("n") {
        if n.as_u64() != Some(x.len() as u64) {
            return Err(Error::Parse(format!("\"n\" = {n} does not match {} entries", x.len())));
        }
    }
    Ok(x)
}

/// A parsed generator specification.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec<S> {
    Quat(QuatGenSpec<S>),
    Complex(ComplexGenSpec<S>),
}

impl<S: JsonScalar> GeneratorSpec<S> {
    pub fn n(&self) -> usize {
        match self {
            GeneratorSpec::Quat(s) => s.n(),
            GeneratorSpec::Complex(s) => s.n(),
        }
    }
}

fn check_n(v: &Value, found: usize) -> Result<()> {
    if let Some(n) = v.get("n") {
        if n.as_u64() != Some(found as u64) {
            return Err(Error::Parse(format!("spec \"n\" = {n} does not match a {found}x{found} matrix")));
        }
    }
    Ok(())
}

pub fn quat_spec_to_json<S: JsonScalar>(spec: &QuatGenSpec<S>) -> Value {
    json!({"ring": "quat", "n": spec.n(), "A": matrix_to_json(&spec.a), "hbar": spec.hbar.to_json()})
}

pub fn complex_spec_to_json<S: JsonScalar>(spec: &ComplexGenSpec<S>) -> Value {
    json!({"ring": "complex", "n": spec.n(), "lambda": spec.lambda.to_json(), "B": matrix_to_json(&spec.b)})
}

pub fn spec_from_json<S: JsonScalar>(v: &Value) -> Result<GeneratorSpec<S>> {
    let ring = field(v, "ring")?.as_str().ok_or_else(|| Error::Parse("\"ring\" must be a string".into()))?;
    match ring {
        "quat" | "quaternionic" => {
            let a = matrix_from_json(field(v, "A")?)?;
            check_n(v, a.rows())?;
            let hbar = match v.get("hbar") {
                Some(h) => S::from_json(h)?,
                None => S::one(),
            };
            Ok(GeneratorSpec::Quat(QuatGenSpec::new(a, hbar)?))
        }
        "complex" => {
            let n = match v.get("B") {
                Some(_) => None,
                None => Some(usize_field(v, "n")?),
            };
            let b = match n {
                Some(n) => QMatrix::zeros(n, n),
                None => matrix_from_json(field(v, "B")?)?,
            };
            check_n(v, b.rows())?;
            let lambda = S::from_json(field(v, "lambda")?)?;
            Ok(GeneratorSpec::Complex(ComplexGenSpec::new(lambda, b)?))
        }
        other => Err(Error::Parse(format!("unknown ring {other:?}"))),
    }
}
