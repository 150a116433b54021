//! Matrix inputs of `sympl check` and `liealg classify`: `{"matrix": [[...]]}` or `{"coords": [...]}`.

use crate::error::{Error, Result};
use crate::liealg::basis::{to_matrix, DIM};
use crate::matrix::Mat;
use crate::scalar::{parse_q, q_to_f64, Q};
use serde_json::Value;

fn entry_q(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) => parse_q(&n.to_string()),
        _ => Err(Error::Parse(format!("matrix entry {v} is neither a number nor a string"))),
    }
}

fn entry_f64(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("entry {n} is not finite"))),
        Value::String(s) => parse_q(s).map(|x| q_to_f64(&x)).or_else(|_| s.trim().parse().map_err(|_| Error::Parse(format!("bad entry {s:?}")))),
        _ => Err(Error::Parse(format!("matrix entry {v} is neither a number nor a string"))),
    }
}

fn rows(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse("expected an array".into()))
}

fn parse_with<S: crate::scalar::Scalar>(doc: &Value, entry: impl Fn(&Value) -> Result<S>, from_q: impl Fn(&Mat<Q>) -> Mat<S>) -> Result<Mat<S>> {
    if let Some(m) = doc.get("matrix") {
        let rs: Vec<Vec<S>> = rows(m)?.iter().map(|r| rows(r)?.iter().map(&entry).collect()).collect::<Result<_>>()?;
        return Mat::from_rows(rs);
    }
    if let Some(c) = doc.get("coords") {
        let c: Vec<Q> = rows(c)?.iter().map(entry_q).collect::<Result<_>>()?;
        if c.len() != DIM {
            return Err(Error::DimensionMismatch(format!("expected {DIM} coordinates, got {}", c.len())));
        }
        return Ok(from_q(&to_matrix(&c)));
    }
    Err(Error::Parse("expected a \"matrix\" or \"coords\" field".into()))
}

/// Exact matrix; every entry must be a rational string or a finite decimal.
pub fn matrix_exact(doc: &Value) -> Result<Mat<Q>> {
    parse_with(doc, entry_q, |m| m.clone())
}

/// Float matrix.
pub fn matrix_float(doc: &Value) -> Result<Mat<f64>> {
    parse_with(doc, entry_f64, |m| m.to_f64())
}
