//! Python bindings. Scalar operations take and return floats; structured
//! results (verdicts, reports, constant bundles) come back as plain dicts
//! and lists with the same field names the JSON schemas use. Input errors
//! raise ValueError, internal numeric failures RuntimeError.

use dehn_bounds::bounds::{self, BoundStyle, LhatWindow, VolumeDefect};
use dehn_bounds::calculus::{self, MonotoneMap, Variant};
use dehn_bounds::constants::{self, ConstantMode};
use dehn_bounds::parental::{self, ScreenConfig};
use dehn_bounds::records;
use dehn_bounds::tube::{self, TanhRadius};
use dehn_bounds::verification;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_error(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn parse_style(style: &str) -> PyResult<BoundStyle> {
    match style {
        "linear" => Ok(BoundStyle::Linear),
        "composed" => Ok(BoundStyle::Composed),
        other => Err(value_error(format!(
            "unknown bound style {other:?}; expected \"linear\" or \"composed\""
        ))),
    }
}

fn parse_mode(mode: &str) -> PyResult<ConstantMode> {
    match mode {
        "published" => Ok(ConstantMode::Published),
        "computed" => Ok(ConstantMode::Computed),
        other => Err(value_error(format!(
            "unknown constant mode {other:?}; expected \"published\" or \"computed\""
        ))),
    }
}

fn tanh_radius(z: f64) -> PyResult<TanhRadius> {
    TanhRadius::new(z).map_err(value_error)
}

fn json_to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<PyObject> {
    Ok(match value {
        serde_json::Value::Null => py.None(),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().unbind().into(),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.unbind().into()
            } else {
                n.as_f64()
                    .ok_or_else(|| value_error("non-finite number in JSON"))?
                    .into_pyobject(py)?
                    .unbind()
                    .into()
            }
        }
        serde_json::Value::String(s) => s.into_pyobject(py)?.unbind().into(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.unbind().into()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, json_to_py(py, v)?)?;
            }
            dict.unbind().into()
        }
    })
}

fn serialize_to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<PyObject> {
    let json = serde_json::to_value(value).map_err(runtime_error)?;
    json_to_py(py, &json)
}

/// The fixed reference table: K, thresholds, and window scales.
#[pyfunction]
fn published_constants(py: Python<'_>) -> PyResult<PyObject> {
    serialize_to_py(py, &constants::published_constants())
}

/// Recompute the constant bundle at the given quadrature tolerance.
#[pyfunction]
#[pyo3(signature = (tol = 1e-12))]
fn computed_constants(py: Python<'_>, tol: f64) -> PyResult<PyObject> {
    let c = constants::compute_constants(tol).map_err(value_error)?;
    let dict = PyDict::new(py);
    dict.set_item("betaLo", c.beta.lo_f64())?;
    dict.set_item("betaHi", c.beta.hi_f64())?;
    dict.set_item("a", c.a)?;
    dict.set_item("b", c.b)?;
    dict.set_item("c", c.c)?;
    dict.set_item("d", c.d)?;
    dict.set_item("alpha", c.alpha)?;
    dict.set_item("delta", c.delta)?;
    dict.set_item("gamma", c.gamma)?;
    dict.set_item("tAtFloor", c.t_at_floor)?;
    dict.set_item("tol", c.tol)?;
    Ok(dict.unbind().into())
}

/// The six decision constants under the chosen mode.
#[pyfunction]
#[pyo3(signature = (mode = "published"))]
fn decision_constants(py: Python<'_>, mode: &str) -> PyResult<PyObject> {
    let dc = constants::decision_constants(parse_mode(mode)?);
    let dict = PyDict::new(py);
    dict.set_item("alpha", dc.alpha)?;
    dict.set_item("delta", dc.delta)?;
    dict.set_item("gamma", dc.gamma)?;
    dict.set_item("shortSlope", dc.short_slope)?;
    dict.set_item("coreLenCap", dc.core_len_cap)?;
    dict.set_item("defectCap", dc.defect_cap)?;
    Ok(dict.unbind().into())
}

/// Geodesic length of a slope divided by the square root of its cusp area.
#[pyfunction]
fn slope_normalized_length(length: f64, area: f64) -> PyResult<f64> {
    parental::slope_normalized_length(length, area).map_err(value_error)
}

/// Combine per-cusp normalized lengths by reciprocal-square summation.
#[pyfunction]
fn combine_normalized_lengths(lengths: Vec<f64>) -> PyResult<f64> {
    parental::combine_normalized_lengths(&lengths).map_err(value_error)
}

/// The geometry ratios h, g, g~, h' at one tanh-radius.
#[pyfunction]
fn geometry(py: Python<'_>, z: f64) -> PyResult<PyObject> {
    let bundle = tube::eval_geometry(tanh_radius(z)?);
    let dict = PyDict::new(py);
    dict.set_item("h", bundle.h)?;
    dict.set_item("g", bundle.g)?;
    dict.set_item("gTilde", bundle.g_tilde)?;
    dict.set_item("hPrime", bundle.h_prime)?;
    Ok(dict.unbind().into())
}

/// Volume-defect lower bound LB(z).
#[pyfunction]
#[pyo3(signature = (z, tol = 1e-12))]
fn defect_lower_bound(z: f64, tol: f64) -> PyResult<f64> {
    tanh_radius(z)?;
    Ok(calculus::defect_lower_bound(z, tol)
        .map_err(value_error)?
        .value)
}

/// Volume-defect upper bound UB(z).
#[pyfunction]
#[pyo3(signature = (z, tol = 1e-12))]
fn defect_upper_bound(z: f64, tol: f64) -> PyResult<f64> {
    tanh_radius(z)?;
    Ok(calculus::defect_upper_bound(z, tol)
        .map_err(value_error)?
        .value)
}

/// Slope-length profile f(z), or the tilde variant.
#[pyfunction]
#[pyo3(signature = (z, tilde = false, tol = 1e-12))]
fn slope_profile(z: f64, tilde: bool, tol: f64) -> PyResult<f64> {
    tanh_radius(z)?;
    let variant = if tilde {
        Variant::Tilde
    } else {
        Variant::Plain
    };
    Ok(calculus::slope_profile(z, variant, tol)
        .map_err(value_error)?
        .value)
}

/// Invert one of the monotone maps by bisection. Map names:
/// "defect-lower", "defect-upper", "profile-plain", "profile-tilde".
#[pyfunction]
#[pyo3(signature = (map, target, tol = 1e-9))]
fn invert_monotone(map: &str, target: f64, tol: f64) -> PyResult<f64> {
    let map = match map {
        "defect-lower" => MonotoneMap::DefectLower,
        "defect-upper" => MonotoneMap::DefectUpper,
        "profile-plain" => MonotoneMap::ProfilePlain,
        "profile-tilde" => MonotoneMap::ProfileTilde,
        other => {
            return Err(value_error(format!(
                "unknown map {other:?}; expected one of defect-lower, defect-upper, profile-plain, profile-tilde"
            )))
        }
    };
    Ok(calculus::invert_monotone(map, target, tol)
        .map_err(value_error)?
        .get())
}

/// Upper bound on the filled core geodesic length from the volume defect.
#[pyfunction]
#[pyo3(signature = (delta_v, style = "linear", mode = "published", tol = 1e-12))]
fn ell_upper(delta_v: f64, style: &str, mode: &str, tol: f64) -> PyResult<f64> {
    bounds::ell_upper(
        VolumeDefect(delta_v),
        parse_style(style)?,
        parse_mode(mode)?,
        tol,
    )
    .map_err(value_error)
}

/// The squared combined-normalized-length window, or None when empty.
#[pyfunction]
#[pyo3(signature = (delta_v, style = "linear", mode = "published", tol = 1e-12))]
fn lhat_sq_window(delta_v: f64, style: &str, mode: &str, tol: f64) -> PyResult<Option<(f64, f64)>> {
    let window = bounds::lhat_sq_window(
        VolumeDefect(delta_v),
        parse_style(style)?,
        parse_mode(mode)?,
        tol,
    )
    .map_err(value_error)?;
    Ok(match window {
        LhatWindow::Empty => None,
        LhatWindow::Nonempty { lo_sq, hi_sq } => Some((lo_sq, hi_sq)),
    })
}

/// What a claimed filling relationship with these volumes must satisfy,
/// as a verdict dict (published constants).
#[pyfunction]
#[pyo3(signature = (parent_volume, child_volume, epsilon = 1e-6))]
fn parental_obligations(
    py: Python<'_>,
    parent_volume: f64,
    child_volume: f64,
    epsilon: f64,
) -> PyResult<PyObject> {
    let verdict = parental::parental_obligations(parent_volume, child_volume, epsilon)
        .map_err(value_error)?;
    serialize_to_py(py, &verdict)
}

/// Screen a parent/child pair of manifold records given as JSON strings;
/// returns the verdict dict.
#[pyfunction]
#[pyo3(signature = (parent_json, child_json, epsilon = 1e-6, style = "linear", tol = 1e-12))]
fn screen_pair(
    py: Python<'_>,
    parent_json: &str,
    child_json: &str,
    epsilon: f64,
    style: &str,
    tol: f64,
) -> PyResult<PyObject> {
    let parent = records::manifold_from_json(parent_json).map_err(value_error)?;
    let child = records::manifold_from_json(child_json).map_err(value_error)?;
    let config = ScreenConfig {
        epsilon,
        style: parse_style(style)?,
        tol,
        ..ScreenConfig::default()
    };
    let verdict = parental::screen_pair(&parent, &child, &config).map_err(value_error)?;
    serialize_to_py(py, &verdict)
}

/// Run the verification battery; returns a list of check-report dicts.
#[pyfunction]
#[pyo3(signature = (grid_n = 2000, debug_k = None))]
fn run_verification(py: Python<'_>, grid_n: usize, debug_k: Option<f64>) -> PyResult<PyObject> {
    let reports = verification::run_all(grid_n, debug_k).map_err(runtime_error)?;
    serialize_to_py(py, &reports)
}

/// Smallest tanh-radius the packing argument allows.
#[pyfunction]
fn packing_floor() -> f64 {
    tube::packing_floor()
}

/// Left end of the working subrange, sqrt(1/3).
#[pyfunction]
fn working_floor() -> f64 {
    tube::working_floor()
}

#[pymodule]
fn dehn_bounds_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("K", tube::K)?;
    m.add_function(wrap_pyfunction!(published_constants, m)?)?;
    m.add_function(wrap_pyfunction!(computed_constants, m)?)?;
    m.add_function(wrap_pyfunction!(decision_constants, m)?)?;
    m.add_function(wrap_pyfunction!(slope_normalized_length, m)?)?;
    m.add_function(wrap_pyfunction!(combine_normalized_lengths, m)?)?;
    m.add_function(wrap_pyfunction!(geometry, m)?)?;
    m.add_function(wrap_pyfunction!(defect_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(defect_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(slope_profile, m)?)?;
    m.add_function(wrap_pyfunction!(invert_monotone, m)?)?;
    m.add_function(wrap_pyfunction!(ell_upper, m)?)?;
    m.add_function(wrap_pyfunction!(lhat_sq_window, m)?)?;
    m.add_function(wrap_pyfunction!(parental_obligations, m)?)?;
    m.add_function(wrap_pyfunction!(screen_pair, m)?)?;
    m.add_function(wrap_pyfunction!(run_verification, m)?)?;
    m.add_function(wrap_pyfunction!(packing_floor, m)?)?;
    m.add_function(wrap_pyfunction!(working_floor, m)?)?;
    Ok(())
}
