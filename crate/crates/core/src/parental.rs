//! The parental test: what any claim that one manifold Dehn-fills another
//! must survive.
//!
//! A filling either uses a short multislope (combined normalized length
//! at most the short-slope threshold) or lands in the long-slope regime,
//! where its squared combined normalized length is pinned to a window
//! determined by the volume defect and the core of the added solid torus
//! is shorter than a ceiling. Screening enumerates candidate fillings
//! from the parent's slope lists and certifies the negative verdict only
//! when the record cutoffs prove the lists complete enough.

use crate::bounds::{self, BoundStyle, BoundsError, LhatWindow, VolumeDefect};
use crate::calculus;
use crate::constants::{self, ConstantMode};
use crate::records::ManifoldRecord;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParentalError {
    #[error("length must be positive and finite, got {0}")]
    BadLength(f64),
    #[error("cusp area must be positive and finite, got {0}")]
    BadArea(f64),
    #[error("volume must be positive and finite, got {0}")]
    BadVolume(f64),
    #[error("epsilon must be nonnegative and finite, got {0}")]
    BadEpsilon(f64),
    #[error("cannot combine an empty list of normalized lengths")]
    EmptyCombination,
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

/// Normalized length of a slope: torus length over the square root of the
/// torus area.
pub fn slope_normalized_length(length: f64, area: f64) -> Result<f64, ParentalError> {
    if !(length.is_finite() && length > 0.0) {
        return Err(ParentalError::BadLength(length));
    }
    if !(area.is_finite() && area > 0.0) {
        return Err(ParentalError::BadArea(area));
    }
    Ok(length / area.sqrt())
}

/// Combined normalized length of a multislope: the harmonic-in-squares
/// combination (sum of inverse squares, inverted, square-rooted). Never
/// exceeds the smallest input.
pub fn combine_normalized_lengths(lengths: &[f64]) -> Result<f64, ParentalError> {
    if lengths.is_empty() {
        return Err(ParentalError::EmptyCombination);
    }
    let mut inv_sq_sum = 0.0;
    for &l in lengths {
        if !(l.is_finite() && l > 0.0) {
            return Err(ParentalError::BadLength(l));
        }
        inv_sq_sum += 1.0 / (l * l);
    }
    Ok(inv_sq_sum.sqrt().recip())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictTag {
    /// The child's volume is not smaller: no filling relationship exists.
    ExcludedByVolume,
    /// Defect too large for the long-slope regime: only short multislopes
    /// remain to check.
    ShortSlopeOnly,
    /// Both regimes live; obligations list what each one requires.
    TwoRegimes,
    /// Every candidate regime is certifiably empty for this pair.
    NotParentCertified,
    /// Candidates or data gaps remain; obligations and warnings say which.
    Inconclusive,
}

impl std::fmt::Display for VerdictTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            VerdictTag::ExcludedByVolume => "ExcludedByVolume",
            VerdictTag::ShortSlopeOnly => "ShortSlopeOnly",
            VerdictTag::TwoRegimes => "TwoRegimes",
            VerdictTag::NotParentCertified => "NotParentCertified",
            VerdictTag::Inconclusive => "Inconclusive",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ParentalVerdict {
    pub tag: VerdictTag,
    /// Parent volume minus child volume.
    pub delta_v: f64,
    /// Ceiling on the core geodesic length in the long-slope regime.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geodesic_ceiling: Option<f64>,
    /// Window for the squared combined normalized length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<LhatWindow>,
    pub obligations: Vec<String>,
    pub warnings: Vec<String>,
}

/// What a claimed filling relationship with the given volumes must
/// satisfy, using the published decision constants.
pub fn parental_obligations(
    vol_parent: f64,
    vol_child: f64,
    epsilon: f64,
) -> Result<ParentalVerdict, ParentalError> {
    for v in [vol_parent, vol_child] {
        if !(v.is_finite() && v > 0.0) {
            return Err(ParentalError::BadVolume(v));
        }
    }
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(ParentalError::BadEpsilon(epsilon));
    }
    let dv = vol_parent - vol_child;
    if dv <= 0.0 {
        return Ok(ParentalVerdict {
            tag: VerdictTag::ExcludedByVolume,
            delta_v: dv,
            geodesic_ceiling: None,
            window: None,
            obligations: vec![],
            warnings: vec![],
        });
    }
    let dc = constants::decision_constants(ConstantMode::Published);
    let tol = calculus::DEFAULT_QUAD_TOL;
    let window = bounds::lhat_sq_window(
        VolumeDefect(dv),
        BoundStyle::Linear,
        ConstantMode::Published,
        tol,
    )?;
    let short_obligation = format!(
        "enumerate all multislopes with combined normalized length at most {} and test each filling for an isometry with the child",
        dc.short_slope + epsilon
    );
    match window {
        LhatWindow::Empty => Ok(ParentalVerdict {
            tag: VerdictTag::ShortSlopeOnly,
            delta_v: dv,
            geodesic_ceiling: None,
            window: Some(window),
            obligations: vec![short_obligation],
            warnings: vec![],
        }),
        LhatWindow::Nonempty { lo_sq, hi_sq } => {
            let ceiling = bounds::ell_upper(
                VolumeDefect(dv),
                BoundStyle::Linear,
                ConstantMode::Published,
                tol,
            )?;
            Ok(ParentalVerdict {
                tag: VerdictTag::TwoRegimes,
                delta_v: dv,
                geodesic_ceiling: Some(ceiling),
                window: Some(window),
                obligations: vec![
                    short_obligation,
                    format!(
                        "for any filling whose squared combined normalized length lies in [{lo_sq}, {hi_sq}], verify that the child contains a closed geodesic shorter than {ceiling}"
                    ),
                ],
                warnings: vec![],
            })
        }
    }
}

/// Screening configuration. The defaults match the published decision
/// constants and the linear bound style.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct ScreenConfig {
    /// Additive slack on the short-slope threshold.
    pub epsilon: f64,
    pub style: BoundStyle,
    pub mode: ConstantMode,
    /// Treat nonincreasing volume as an outright exclusion.
    pub exclude_on_volume: bool,
    /// Cap on the number of slope combinations enumerated.
    pub product_budget: usize,
    /// Quadrature tolerance for the composed style.
    pub tol: f64,
}

impl Default for ScreenConfig {
    fn default() -> Self {
        ScreenConfig {
            epsilon: 1e-6,
            style: BoundStyle::Linear,
            mode: ConstantMode::Published,
            exclude_on_volume: true,
            product_budget: 100_000,
            tol: calculus::DEFAULT_QUAD_TOL,
        }
    }
}

const MAX_LISTED_OBLIGATIONS: usize = 200;

/// One cusp's contribution space, in inverse-square normalized length
/// ("weight") coordinates: exact weights for listed slopes, plus the open
/// interval (0, unlisted_cap) for every slope beyond the cutoff.
struct CuspWeights {
    listed: Vec<(String, f64)>,
    unlisted_cap: f64,
}

fn cusp_weights(record: &ManifoldRecord) -> Result<Vec<CuspWeights>, ParentalError> {
    record
        .cusps
        .iter()
        .map(|cusp| {
            let normalized_cutoff = slope_normalized_length(cusp.slope_length_cutoff, cusp.area)?;
            let listed = cusp
                .slopes
                .iter()
                .map(|s| {
                    let n = slope_normalized_length(s.length, cusp.area)?;
                    Ok((s.name.clone(), 1.0 / (n * n)))
                })
                .collect::<Result<Vec<_>, ParentalError>>()?;
            Ok(CuspWeights {
                listed,
                unlisted_cap: 1.0 / (normalized_cutoff * normalized_cutoff),
            })
        })
        .collect()
}

/// A half-open target in total-weight space: [lo, hi] with hi possibly
/// infinite (the short region) or a band (the window).
#[derive(Clone, Copy)]
struct WeightBand {
    lo: f64,
    hi: f64,
}

/// Result of enumerating all combinations against one band.
struct BandScan {
    /// Fully listed combinations landing inside the band, as
    /// (description, combined normalized length).
    hits: Vec<(String, f64)>,
    hits_truncated: usize,
    /// Some combination that uses unlisted slopes can reach the band:
    /// the cutoffs do not prove the candidate list complete.
    unlisted_reach: bool,
    /// Enumeration aborted: combination count exceeds the budget.
    over_budget: bool,
}

fn scan_band(cusps: &[CuspWeights], band: WeightBand, budget: usize) -> BandScan {
    let mut leaves: usize = 1;
    for c in cusps {
        leaves = leaves.saturating_mul(c.listed.len() + 1);
    }
    if leaves > budget {
        return BandScan {
            hits: vec![],
            hits_truncated: 0,
            unlisted_reach: false,
            over_budget: true,
        };
    }
    let mut scan = BandScan {
        hits: vec![],
        hits_truncated: 0,
        unlisted_reach: false,
        over_budget: false,
    };
    let mut picks: Vec<Option<usize>> = vec![None; cusps.len()];
    recurse(cusps, band, 0, 0.0, 0.0, &mut picks, &mut scan);
    scan
}

fn recurse(
    cusps: &[CuspWeights],
    band: WeightBand,
    depth: usize,
    listed_sum: f64,
    interval_sum: f64,
    picks: &mut Vec<Option<usize>>,
    scan: &mut BandScan,
) {
    if depth == cusps.len() {
        if interval_sum == 0.0 {
            if band.lo <= listed_sum && listed_sum <= band.hi {
                if scan.hits.len() < MAX_LISTED_OBLIGATIONS {
                    let names: Vec<&str> = picks
                        .iter()
                        .enumerate()
                        .map(|(i, p)| cusps[i].listed[p.expect("all listed")].0.as_str())
                        .collect();
                    let combined = listed_sum.sqrt().recip();
                    scan.hits.push((names.join(", "), combined));
                } else {
                    scan.hits_truncated += 1;
                }
            }
        } else {
            // the reachable total weights form the interval
            // (listed_sum, listed_sum + interval_sum); conservatively
            // treat its closure as reachable
            if listed_sum <= band.hi && listed_sum + interval_sum >= band.lo {
                scan.unlisted_reach = true;
            }
        }
        return;
    }
    for (j, &(_, w)) in cusps[depth].listed.iter().enumerate() {
        picks[depth] = Some(j);
        recurse(
            cusps,
            band,
            depth + 1,
            listed_sum + w,
            interval_sum,
            picks,
            scan,
        );
    }
    picks[depth] = None;
    recurse(
        cusps,
        band,
        depth + 1,
        listed_sum,
        interval_sum + cusps[depth].unlisted_cap,
        picks,
        scan,
    );
}

/// Screen a concrete (parent, child) record pair. Nonincreasing volume
/// yields `ExcludedByVolume` outright (unless that rule is disabled).
/// Otherwise returns `NotParentCertified` only when every live disjunct
/// is certifiably empty under the records' completeness cutoffs, and
/// `Inconclusive` with the surviving obligations if not.
pub fn screen_pair(
    parent: &ManifoldRecord,
    child: &ManifoldRecord,
    config: &ScreenConfig,
) -> Result<ParentalVerdict, ParentalError> {
    if !(config.epsilon.is_finite() && config.epsilon >= 0.0) {
        return Err(ParentalError::BadEpsilon(config.epsilon));
    }
    let dv = parent.volume - child.volume;
    if dv <= 0.0 {
        let warning = format!(
            "child volume {} is not smaller than parent volume {}; a filling strictly decreases volume",
            child.volume, parent.volume
        );
        return Ok(if config.exclude_on_volume {
            ParentalVerdict {
                tag: VerdictTag::ExcludedByVolume,
                delta_v: dv,
                geodesic_ceiling: None,
                window: None,
                obligations: vec![],
                warnings: vec![warning],
            }
        } else {
            ParentalVerdict {
                tag: VerdictTag::Inconclusive,
                delta_v: dv,
                geodesic_ceiling: None,
                window: None,
                obligations: vec![],
                warnings: vec![warning, "volume exclusion is disabled".into()],
            }
        });
    }

    let dc = constants::decision_constants(config.mode);
    let window = bounds::lhat_sq_window(VolumeDefect(dv), config.style, config.mode, config.tol)?;
    let ceiling = bounds::ell_upper(VolumeDefect(dv), config.style, config.mode, config.tol)?;

    if parent.cusps.is_empty() {
        return Ok(ParentalVerdict {
            tag: VerdictTag::NotParentCertified,
            delta_v: dv,
            geodesic_ceiling: Some(ceiling),
            window: Some(window),
            obligations: vec![],
            warnings: vec!["parent record lists no cusps, so it admits no fillings".into()],
        });
    }

    let cusps = cusp_weights(parent)?;
    let mut obligations = Vec::new();
    let mut warnings = Vec::new();

    // short regime: combined normalized length at most threshold, i.e.
    // total weight at least 1/threshold^2
    let threshold = dc.short_slope + config.epsilon;
    let short_scan = scan_band(
        &cusps,
        WeightBand {
            lo: 1.0 / (threshold * threshold),
            hi: f64::INFINITY,
        },
        config.product_budget,
    );
    if short_scan.over_budget {
        warnings.push(format!(
            "slope combination count exceeds the budget of {}; screening is incomplete",
            config.product_budget
        ));
    }
    for (names, combined) in &short_scan.hits {
        obligations.push(format!(
            "fill ({names}): combined normalized length {combined:.6} is at most the short-slope threshold {threshold}; test the filling for an isometry with the child"
        ));
    }
    if short_scan.hits_truncated > 0 {
        obligations.push(format!(
            "... and {} more short combinations",
            short_scan.hits_truncated
        ));
    }
    if short_scan.unlisted_reach {
        warnings.push(format!(
            "slopes beyond the listed cutoffs could combine to normalized length {threshold} or less; the short candidate list is not certifiably complete"
        ));
    }
    let short_empty_certified = !short_scan.over_budget
        && short_scan.hits.is_empty()
        && short_scan.hits_truncated == 0
        && !short_scan.unlisted_reach;

    // long-slope regime: squared combined normalized length inside the
    // window AND a child geodesic below the ceiling
    let live_geodesic = child.geodesics.iter().copied().find(|&g| g < ceiling);
    let geodesics_certified_absent = live_geodesic.is_none() && child.geodesic_cutoff >= ceiling;

    let (window_empty_certified, window_scan) = match window {
        LhatWindow::Empty => (true, None),
        LhatWindow::Nonempty { lo_sq, hi_sq } => {
            let scan = scan_band(
                &cusps,
                WeightBand {
                    lo: 1.0 / hi_sq,
                    hi: 1.0 / lo_sq,
                },
                config.product_budget,
            );
            let certified = !scan.over_budget
                && scan.hits.is_empty()
                && scan.hits_truncated == 0
                && !scan.unlisted_reach;
            (certified, Some(scan))
        }
    };

    let certified = short_empty_certified && (window_empty_certified || geodesics_certified_absent);

    if !certified && !window_empty_certified && !geodesics_certified_absent {
        // both halves of the long-slope disjunct are live: report them
        if let (Some(scan), LhatWindow::Nonempty { lo_sq, hi_sq }) = (&window_scan, window) {
            for (names, combined) in &scan.hits {
                let sq = combined * combined;
                obligations.push(format!(
                    "fill ({names}): squared combined normalized length {sq:.6} lies in the window [{lo_sq:.6}, {hi_sq:.6}]; the child must contain a closed geodesic shorter than {ceiling:.6}"
                ));
            }
            if scan.hits_truncated > 0 {
                obligations.push(format!(
                    "... and {} more window combinations",
                    scan.hits_truncated
                ));
            }
            if scan.unlisted_reach {
                warnings.push(
                    "slopes beyond the listed cutoffs could combine into the window; the window candidate list is not certifiably complete".into(),
                );
            }
        }
        match live_geodesic {
            Some(g) => warnings.push(format!(
                "child has a closed geodesic of length {g}, below the ceiling {ceiling}; the long-slope regime stays live"
            )),
            None => warnings.push(format!(
                "child geodesic spectrum is only complete up to {}, below the ceiling {ceiling}; cannot certify the absence of a short core geodesic",
                child.geodesic_cutoff
            )),
        }
    }

    Ok(ParentalVerdict {
        tag: if certified {
            VerdictTag::NotParentCertified
        } else {
            VerdictTag::Inconclusive
        },
        delta_v: dv,
        geodesic_ceiling: Some(ceiling),
        window: Some(window),
        obligations,
        warnings,
    })
}
