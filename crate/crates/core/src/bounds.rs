//! Bounds driven by the volume defect of a filling.
//!
//! Two styles are provided for each decision quantity. The linear style
//! applies the decision constants directly (ceiling alpha * defect, window
//! [delta / defect, gamma / defect]). The composed style pushes the defect
//! through the certified inverses of the defect bounds and the slope
//! profiles, which is sharper but only defined where the inverses are; out
//! of range it falls back to the unconditional caps.

use crate::calculus::{self, CalculusError, MonotoneMap, Variant};
use crate::constants::{self, ConstantMode};
use crate::tube;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundsError {
    #[error("volume defect {0} is not positive")]
    NonpositiveDefect(f64),
    #[error("tanh-radius {z} outside the working range ({lo}, 1]")]
    RadiusOutOfRange { z: f64, lo: f64 },
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

/// Parent volume minus child volume. Sign-unrestricted at construction;
/// the bound operations reject nonpositive values themselves.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct VolumeDefect(pub f64);

impl VolumeDefect {
    pub fn new(dv: f64) -> Self {
        VolumeDefect(dv)
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_admissible(self) -> bool {
        self.0.is_finite() && self.0 > 0.0
    }
}

/// How a decision bound is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "camelCase")]
pub enum BoundStyle {
    /// Decision constants applied linearly in the defect (default).
    #[default]
    Linear,
    /// Composition through the certified inverse maps.
    Composed,
}

impl std::fmt::Display for BoundStyle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundStyle::Linear => write!(f, "linear"),
            BoundStyle::Composed => write!(f, "composed"),
        }
    }
}

/// Admissible range for the squared combined normalized length of a
/// long-slope filling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum LhatWindow {
    /// The long-slope regime is impossible at this defect.
    Empty,
    #[serde(rename_all = "camelCase")]
    Nonempty { lo_sq: f64, hi_sq: f64 },
}

impl LhatWindow {
    pub fn is_empty(&self) -> bool {
        matches!(self, LhatWindow::Empty)
    }

    pub fn contains_sq(&self, sq: f64) -> bool {
        match *self {
            LhatWindow::Empty => false,
            LhatWindow::Nonempty { lo_sq, hi_sq } => lo_sq <= sq && sq <= hi_sq,
        }
    }
}

fn check_radius(z: f64) -> Result<(), BoundsError> {
    let lo = tube::working_floor();
    if z.is_finite() && z > lo && z <= 1.0 {
        Ok(())
    } else {
        Err(BoundsError::RadiusOutOfRange { z, lo })
    }
}

/// Bracket the volume defect from a bracket on the tanh-radius of the
/// filling's tube: the lower defect bound at the lower radius and the
/// upper defect bound at the upper radius. Both radii may equal 1, where
/// both bounds vanish.
pub fn volume_defect_bracket(
    z_lower: f64,
    z_upper: f64,
    tol: f64,
) -> Result<(f64, f64), BoundsError> {
    check_radius(z_lower)?;
    check_radius(z_upper)?;
    let lo = calculus::defect_lower_bound(z_lower, tol)?.value;
    let hi = calculus::defect_upper_bound(z_upper, tol)?.value;
    Ok((lo, hi))
}

/// Bracket the core geodesic length from a bracket on the tanh-radius:
/// K / (2 pi h(z)) at each endpoint. Decreasing in z, zero at z = 1.
pub fn core_length_bounds(z_lower: f64, z_upper: f64) -> Result<(f64, f64), BoundsError> {
    check_radius(z_lower)?;
    check_radius(z_upper)?;
    let at = |z: f64| tube::K / (2.0 * PI * tube::h(z));
    Ok((at(z_lower), at(z_upper)))
}

/// Upper bound on the core geodesic length of a filling with the given
/// volume defect. Always at most the unconditional cap; the composed
/// style falls back to the cap where the composition leaves its domain
/// (defect beyond the lower-bound range, or profile saturation).
pub fn ell_upper(
    dv: VolumeDefect,
    style: BoundStyle,
    mode: ConstantMode,
    tol: f64,
) -> Result<f64, BoundsError> {
    if !dv.is_admissible() {
        return Err(BoundsError::NonpositiveDefect(dv.0));
    }
    let dc = constants::decision_constants(mode);
    let cap = dc.core_len_cap;
    match style {
        BoundStyle::Linear => Ok((dc.alpha * dv.0).min(cap)),
        BoundStyle::Composed => {
            let z_lb = match calculus::invert_monotone(MonotoneMap::DefectLower, dv.0, tol) {
                Ok(z) => z,
                Err(CalculusError::TargetOutOfRange { .. }) => return Ok(cap),
                Err(e) => return Err(e.into()),
            };
            let profile = calculus::slope_profile(z_lb.get(), Variant::Tilde, tol)?.value;
            if !MonotoneMap::ProfilePlain.accepts(profile) {
                // tilde profile at the inverted radius saturates the plain
                // profile's range: no sharpening is available
                return Ok(cap);
            }
            let z_hat = calculus::invert_monotone(MonotoneMap::ProfilePlain, profile, tol)?;
            Ok((tube::K / (2.0 * PI * tube::h(z_hat.get()))).min(cap))
        }
    }
}

/// Window for the squared combined normalized length of a long-slope
/// filling with the given volume defect. Empty when the defect exceeds
/// the style's defect cap.
pub fn lhat_sq_window(
    dv: VolumeDefect,
    style: BoundStyle,
    mode: ConstantMode,
    tol: f64,
) -> Result<LhatWindow, BoundsError> {
    if !dv.is_admissible() {
        return Err(BoundsError::NonpositiveDefect(dv.0));
    }
    let dc = constants::decision_constants(mode);
    match style {
        BoundStyle::Linear => {
            if dv.0 >= dc.defect_cap {
                Ok(LhatWindow::Empty)
            } else {
                Ok(LhatWindow::Nonempty {
                    lo_sq: dc.delta / dv.0,
                    hi_sq: dc.gamma / dv.0,
                })
            }
        }
        BoundStyle::Composed => {
            let two_pi_sq = (2.0 * PI) * (2.0 * PI);
            let z_ub = match calculus::invert_monotone(MonotoneMap::DefectUpper, dv.0, tol) {
                Ok(z) => z,
                // beyond the range of the upper defect bound the
                // long-slope regime is impossible outright
                Err(CalculusError::TargetOutOfRange { .. }) => return Ok(LhatWindow::Empty),
                Err(e) => return Err(e.into()),
            };
            let hi_sq = two_pi_sq / calculus::slope_profile(z_ub.get(), Variant::Plain, tol)?.value;
            let lo_sq = match calculus::invert_monotone(MonotoneMap::DefectLower, dv.0, tol) {
                Ok(z_lb) => {
                    two_pi_sq / calculus::slope_profile(z_lb.get(), Variant::Tilde, tol)?.value
                }
                // unreachable while the lower bound's range contains the
                // upper bound's, but kept total: relax to the short-slope
                // threshold, which every long slope exceeds
                Err(CalculusError::TargetOutOfRange { .. }) => dc.short_slope * dc.short_slope,
                Err(e) => return Err(e.into()),
            };
            debug_assert!(lo_sq <= hi_sq);
            Ok(LhatWindow::Nonempty { lo_sq, hi_sq })
        }
    }
}
