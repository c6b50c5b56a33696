//! JSON records describing manifolds, and the report file the screening
//! command writes.
//!
//! Manifold records are decoded by hand from `serde_json::Value` so that
//! every schema violation can name the offending location as a JSON
//! pointer, e.g. `/cusps/1/slopes/0/length`.

use crate::bounds::BoundStyle;
use crate::constants::ConstantMode;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{pointer}: {message}")]
pub struct RecordError {
    /// JSON pointer to the offending value ("" means the document root).
    pub pointer: String,
    pub message: String,
}

impl RecordError {
    fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        RecordError {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

/// A slope on a cusp: a name (e.g. "3/1") and its length on the cusp
/// torus, not yet normalized by the torus area.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SlopeRecord {
    pub name: String,
    pub length: f64,
}

/// One cusp of the parent: torus area, the torus length up to which the
/// slope list is claimed complete, and the listed slopes.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CuspRecord {
    pub area: f64,
    pub slope_length_cutoff: f64,
    pub slopes: Vec<SlopeRecord>,
}

/// A manifold as the screening commands see it. `geodesics` lists closed
/// geodesic lengths sorted ascending and is claimed complete below
/// `geodesic_cutoff`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ManifoldRecord {
    pub name: String,
    pub volume: f64,
    pub cusps: Vec<CuspRecord>,
    pub geodesic_cutoff: f64,
    pub geodesics: Vec<f64>,
}

pub fn manifold_from_json(text: &str) -> Result<ManifoldRecord, RecordError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| RecordError::new("", format!("invalid JSON: {e}")))?;
    manifold_from_value(&value)
}

pub fn manifold_from_value(value: &Value) -> Result<ManifoldRecord, RecordError> {
    let root = as_object(value, "")?;
    let name = string_field(root, "name", "")?;
    let volume = positive_field(root, "volume", "")?;
    let cusps_value = array_field(root, "cusps", "")?;
    let mut cusps = Vec::with_capacity(cusps_value.len());
    for (i, cusp) in cusps_value.iter().enumerate() {
        cusps.push(cusp_from_value(cusp, &format!("/cusps/{i}"))?);
    }
    let geodesic_cutoff = positive_field(root, "geodesicCutoff", "")?;
    let geodesics_value = array_field(root, "geodesics", "")?;
    let mut geodesics = Vec::with_capacity(geodesics_value.len());
    for (i, g) in geodesics_value.iter().enumerate() {
        let ptr = format!("/geodesics/{i}");
        let len = positive_number(g, &ptr)?;
        if len > geodesic_cutoff {
            return Err(RecordError::new(
                ptr,
                format!("geodesic length {len} exceeds geodesicCutoff {geodesic_cutoff}"),
            ));
        }
        if let Some(&prev) = geodesics.last() {
            if len < prev {
                return Err(RecordError::new(ptr, "geodesics must be sorted ascending"));
            }
        }
        geodesics.push(len);
    }
    Ok(ManifoldRecord {
        name,
        volume,
        cusps,
        geodesic_cutoff,
        geodesics,
    })
}

fn cusp_from_value(value: &Value, ptr: &str) -> Result<CuspRecord, RecordError> {
    let obj = as_object(value, ptr)?;
    let area = positive_field(obj, "area", ptr)?;
    let cutoff = positive_field(obj, "slopeLengthCutoff", ptr)?;
    let slopes_value = array_field(obj, "slopes", ptr)?;
    let mut slopes = Vec::with_capacity(slopes_value.len());
    for (i, slope) in slopes_value.iter().enumerate() {
        let slope_ptr = format!("{ptr}/slopes/{i}");
        let obj = as_object(slope, &slope_ptr)?;
        slopes.push(SlopeRecord {
            name: string_field(obj, "name", &slope_ptr)?,
            length: positive_field(obj, "length", &slope_ptr)?,
        });
    }
    Ok(CuspRecord {
        area,
        slope_length_cutoff: cutoff,
        slopes,
    })
}

fn as_object<'a>(value: &'a Value, ptr: &str) -> Result<&'a Map<String, Value>, RecordError> {
    value
        .as_object()
        .ok_or_else(|| RecordError::new(ptr, "expected an object"))
}

fn get_field<'a>(
    obj: &'a Map<String, Value>,
    key: &str,
    ptr: &str,
) -> Result<&'a Value, RecordError> {
    obj.get(key)
        .ok_or_else(|| RecordError::new(format!("{ptr}/{key}"), "missing required field"))
}

fn string_field(obj: &Map<String, Value>, key: &str, ptr: &str) -> Result<String, RecordError> {
    let v = get_field(obj, key, ptr)?;
    v.as_str()
        .map(str::to_owned)
        .ok_or_else(|| RecordError::new(format!("{ptr}/{key}"), "expected a string"))
}

fn array_field<'a>(
    obj: &'a Map<String, Value>,
    key: &str,
    ptr: &str,
) -> Result<&'a Vec<Value>, RecordError> {
    let v = get_field(obj, key, ptr)?;
    v.as_array()
        .ok_or_else(|| RecordError::new(format!("{ptr}/{key}"), "expected an array"))
}

fn positive_field(obj: &Map<String, Value>, key: &str, ptr: &str) -> Result<f64, RecordError> {
    positive_number(get_field(obj, key, ptr)?, &format!("{ptr}/{key}"))
}

fn positive_number(value: &Value, ptr: &str) -> Result<f64, RecordError> {
    let x = value
        .as_f64()
        .ok_or_else(|| RecordError::new(ptr, "expected a number"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(RecordError::new(
            ptr,
            format!("expected a positive finite number, got {x}"),
        ))
    }
}

/// The report the screening command writes with `--out`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportFile {
    pub version: u32,
    pub parent: String,
    pub child: String,
    pub constant_mode: ConstantMode,
    pub bound_style: BoundStyle,
    pub epsilon: f64,
    pub quad_tol: f64,
    pub verdict: crate::parental::ParentalVerdict,
}

pub const REPORT_VERSION: u32 = 1;

impl ReportFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, RecordError> {
        serde_json::from_str(text).map_err(|e| RecordError::new("", format!("invalid report: {e}")))
    }
}
