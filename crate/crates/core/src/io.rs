//! JSON file formats for voltages and polynomials.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::cospectral::PermPoly;
use crate::cover::{make_voltage, VoltageAssignment};
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FiniteField};
use crate::spectrum::CoverSpectrum;

pub fn field_from_json(value: &Value) -> Result<FiniteField> {
    let desc: FieldDescriptor = serde_json::from_value(value.clone())?;
    FiniteField::from_descriptor(&desc)
}

/// `{"field": {...}, "ell": ℓ, "values": {"<key>": v}}`, keyed by the member of
/// each `±` pair with the smaller index.
pub fn voltage_to_json(voltage: &VoltageAssignment) -> Value {
    let f = voltage.field();
    let values: Map<String, Value> = voltage
        .representative_values()
        .into_iter()
        .map(|(s, v)| (f.key(s), json!(v)))
        .collect();
    json!({
        "field": f.descriptor(),
        "ell": voltage.ell(),
        "values": values,
    })
}

/// Accepts values on either member of a pair, or both when they are opposite.
pub fn voltage_from_json(value: &Value) -> Result<VoltageAssignment> {
    let field = Arc::new(field_from_json(
        value
            .get("field")
            .ok_or_else(|| Error::Parse("voltage file needs \"field\"".into()))?,
    )?);
    voltage_from_json_in(field, value)
}

/// As [`voltage_from_json`], reusing an already built field when it matches.
pub fn voltage_from_json_in(field: Arc<FiniteField>, value: &Value) -> Result<VoltageAssignment> {
    if let Some(desc) = value.get("field") {
        if field_from_json(desc)? != *field {
            return Err(Error::ParameterMismatch(
                "voltage file describes a different field".into(),
            ));
        }
    }
    let ell = value
        .get("ell")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("voltage file needs an integer \"ell\"".into()))?;
    let ell = u32::try_from(ell).map_err(|_| Error::InvalidEll(format!("{ell} is too large")))?;
    let map = value
        .get("values")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Parse("voltage file needs a \"values\" object".into()))?;
    let mut partial = BTreeMap::new();
    for (key, v) in map {
        let s = field.parse_key(key)?;
        let v = v
            .as_i64()
            .ok_or_else(|| Error::Parse(format!("value at {key:?} is not an integer")))?;
        partial.insert(s, v);
    }
    make_voltage(field, ell, &partial)
}

/// `{"field": {...}, "coeffs": {"<exponent>": "<key>"}}`.
pub fn poly_to_json(poly: &PermPoly) -> Value {
    let mut out = poly.to_json();
    out["field"] = json!(poly.field().descriptor());
    out
}

pub fn poly_from_json(field: Option<Arc<FiniteField>>, value: &Value) -> Result<PermPoly> {
    let field = match (field, value.get("field")) {
        (Some(f), Some(desc)) => {
            if field_from_json(desc)? != *f {
                return Err(Error::ParameterMismatch(
                    "polynomial file describes a different field".into(),
                ));
            }
            f
        }
        (Some(f), None) => f,
        (None, Some(desc)) => Arc::new(field_from_json(desc)?),
        (None, None) => return Err(Error::Parse("polynomial file needs \"field\"".into())),
    };
    PermPoly::from_json(field, value)
}

/// `{"field": {...}, "ell": ℓ, "digest": "...", "eigenvalues": [...]}`.
pub fn spectrum_to_json(spec: &CoverSpectrum) -> Value {
    json!({
        "field": spec.field().descriptor(),
        "ell": spec.ell(),
        "digest": spec.digest(),
        "eigenvalues": spec.to_json(),
    })
}

pub fn spectrum_from_json(value: &Value) -> Result<CoverSpectrum> {
    let field = Arc::new(field_from_json(
        value
            .get("field")
            .ok_or_else(|| Error::Parse("spectrum file needs \"field\"".into()))?,
    )?);
    let ell = value
        .get("ell")
        .and_then(Value::as_u64)
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| Error::Parse("spectrum file needs an integer \"ell\"".into()))?;
    let entries = value
        .get("eigenvalues")
        .ok_or_else(|| Error::Parse("spectrum file needs \"eigenvalues\"".into()))?;
    CoverSpectrum::from_json(field, ell, entries)
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    fs::write(path, to_pretty(value))?;
    Ok(())
}

pub fn read_voltage(path: &Path) -> Result<VoltageAssignment> {
    voltage_from_json(&read_json(path)?)
}
