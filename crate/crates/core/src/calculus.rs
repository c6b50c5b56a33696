//! Adaptive quadrature, the integral transforms Phi and Phi~, the
//! volume-defect integrals, the slope-length profiles f and f~, and
//! bisection inversion of the monotone maps built from them.
//!
//! The quadrature kernel is a 15-point Gauss-Kronrod rule with the embedded
//! 7-point Gauss estimate driving adaptive bisection of panels. All
//! integrands used here are rational functions that are pole-free on the
//! closed intervals of integration, so the requested tolerances are easily
//! certified by the embedded estimate.

use crate::tube::{self, TanhRadius, TubeError};
use std::sync::LazyLock;

/// Default absolute quadrature tolerance.
pub const DEFAULT_QUAD_TOL: f64 = 1e-12;
/// Default residual tolerance for monotone inversion.
pub const DEFAULT_INVERT_TOL: f64 = 1e-9;
/// Subdivision budget for one adaptive integration.
pub const PANEL_BUDGET: usize = 1_000_000;
const BISECT_MAX_ITERS: usize = 200;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CalculusError {
    #[error(
        "estimated quadrature error {err:.3e} exceeds tolerance {tol:.3e} after {panels} panels"
    )]
    ToleranceNotMet { err: f64, tol: f64, panels: usize },
    #[error("invalid interval: lower limit {0} exceeds upper limit {1}")]
    InvalidInterval(f64, f64),
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("target {target:.6e} outside the invertible range (0, {hi:.12}) of {map}")]
    TargetOutOfRange {
        map: &'static str,
        target: f64,
        hi: f64,
    },
    #[error("bisection residual never met the tolerance within {0} iterations")]
    BisectionStalled(usize),
    #[error(transparent)]
    Tube(#[from] TubeError),
}

/// An integral value with the quadrature's absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub err: f64,
}

/// Compensated (Kahan) accumulator for long sums of small segments.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

// 15-point Kronrod abscissae (positive half, descending) and weights, with
// the embedded 7-point Gauss weights; the Gauss nodes are the odd-indexed
// Kronrod abscissae.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Sharpen the raw |Kronrod - Gauss| difference into the usual error
/// estimate for the Kronrod value.
fn rescale_error(raw: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = raw.abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    err
}

/// One Gauss-Kronrod 15(7) panel: returns the Kronrod value and its error
/// estimate.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut fv_lo = [0.0; 7];
    let mut fv_hi = [0.0; 7];
    let mut resk = WGK[7] * fc;
    let mut resabs = resk.abs();
    for i in 0..7 {
        let dx = half * XGK[i];
        fv_lo[i] = f(center - dx);
        fv_hi[i] = f(center + dx);
        resk += WGK[i] * (fv_lo[i] + fv_hi[i]);
        resabs += WGK[i] * (fv_lo[i].abs() + fv_hi[i].abs());
    }
    let mut resg = WG[3] * fc;
    for (j, &wg) in WG.iter().take(3).enumerate() {
        let i = 2 * j + 1;
        resg += wg * (fv_lo[i] + fv_hi[i]);
    }

    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for i in 0..7 {
        resasc += WGK[i] * ((fv_lo[i] - reskh).abs() + (fv_hi[i] - reskh).abs());
    }

    let value = resk * half;
    let err = rescale_error(
        (resk - resg) * half,
        resabs * half.abs(),
        resasc * half.abs(),
    );
    (value, err)
}

/// Adaptively integrate `f` over [a, b] to absolute tolerance `tol`, with an
/// explicit panel budget.
pub fn integrate_with_budget<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    budget: usize,
) -> Result<QuadResult, CalculusError> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(CalculusError::BadTolerance(tol));
    }
    if a > b {
        return Err(CalculusError::InvalidInterval(a, b));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            err: 0.0,
        });
    }
    let mut value = KahanSum::new();
    let mut err_total = 0.0;
    let mut panels = 0usize;
    let mut work = vec![(a, b, tol)];
    while let Some((lo, hi, local_tol)) = work.pop() {
        panels += 1;
        if panels > budget {
            return Err(CalculusError::ToleranceNotMet {
                err: err_total,
                tol,
                panels,
            });
        }
        let (v, e) = gk15(&f, lo, hi);
        // stop splitting when the estimate clears the local budget or the
        // panel is too narrow for further refinement to mean anything
        if e <= local_tol || (hi - lo) <= 16.0 * f64::EPSILON * (lo.abs() + hi.abs()) {
            value.add(v);
            err_total += e;
        } else {
            let mid = 0.5 * (lo + hi);
            let half_tol = 0.5 * local_tol;
            work.push((lo, mid, half_tol));
            work.push((mid, hi, half_tol));
        }
    }
    if err_total > tol {
        return Err(CalculusError::ToleranceNotMet {
            err: err_total,
            tol,
            panels,
        });
    }
    Ok(QuadResult {
        value: value.value(),
        err: err_total,
    })
}

/// Adaptive integration with the default panel budget.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadResult, CalculusError> {
    integrate_with_budget(f, a, b, tol, PANEL_BUDGET)
}

/// Fixed-panel midpoint rule, kept as an independent cross-check for the
/// adaptive results. Deliberately naive: no shared machinery with gk15.
pub fn midpoint_rule<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels > 0 && b >= a);
    let width = (b - a) / panels as f64;
    let mut acc = KahanSum::new();
    for i in 0..panels {
        let x = a + width * (i as f64 + 0.5);
        acc.add(f(x));
    }
    acc.value() * width
}

/// `n` equispaced points spanning [lo, hi] inclusive.
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && hi > lo);
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

/// For an ascending grid z_0 < ... < z_{n-1} <= right, return the values
/// integral of f over [z_i, right] for every i.
///
/// Each segment [z_i, z_{i+1}] is integrated with a single Kronrod panel
/// (the segments are tiny and the integrands smooth) and the segments are
/// accumulated right-to-left with compensation, so adjacent grid values
/// differ by exactly one well-resolved segment. This is what makes
/// monotonicity and envelope sweeps trustworthy at the 1e-12 scale.
pub fn cumulative_right_integrals<F: Fn(f64) -> f64>(f: F, zs: &[f64], right: f64) -> Vec<f64> {
    assert!(!zs.is_empty());
    assert!(zs.windows(2).all(|w| w[0] < w[1]));
    assert!(*zs.last().unwrap() <= right);
    let mut out = vec![0.0; zs.len()];
    let mut acc = KahanSum::new();
    let (tail, _) = gk15(&f, *zs.last().unwrap(), right);
    acc.add(tail);
    out[zs.len() - 1] = acc.value();
    for i in (0..zs.len() - 1).rev() {
        let (seg, _) = gk15(&f, zs[i], zs[i + 1]);
        acc.add(seg);
        out[i] = acc.value();
    }
    out
}

/// Which of the two integral transforms to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Plain,
    Tilde,
}

fn check_domain(z: f64, lo: f64, closed_left: bool) -> Result<(), CalculusError> {
    let left_ok = if closed_left { z >= lo } else { z > lo };
    if z.is_finite() && left_ok && z <= 1.0 {
        Ok(())
    } else {
        Err(TubeError::OutOfDomain { z, lo }.into())
    }
}

/// Phi(z) = integral from 1 to z of the (plain or tilde) Phi integrand.
///
/// Zero at z = 1; positive below 1 for the plain variant. The plain variant
/// accepts the whole tanh-radius domain, the tilde variant its working
/// subrange z > sqrt(1/3).
pub fn phi(z: f64, variant: Variant, tol: f64) -> Result<QuadResult, CalculusError> {
    // the tilde transform is stated on (sqrt(1/3), 1] but its integrand is
    // finite at the floor itself, which is where the inversion range
    // supremum lives; accept the closed endpoint there
    match variant {
        Variant::Plain => check_domain(z, tube::packing_floor(), false)?,
        Variant::Tilde => check_domain(z, tube::working_floor(), true)?,
    }
    let r = match variant {
        Variant::Plain => integrate(tube::phi_integrand, z, 1.0, tol)?,
        Variant::Tilde => integrate(tube::phi_tilde_integrand, z, 1.0, tol)?,
    };
    Ok(QuadResult {
        value: -r.value,
        err: r.err,
    })
}

/// The slope-length profile f(z) = K (1-z) e^{-Phi(z)} (plain) or its tilde
/// counterpart f~(z) = K (1-z) e^{-Phi~(z)}.
///
/// Both are positive and strictly decreasing on the working range, with
/// f <= f~ pointwise; both vanish at z = 1. The defining relations
/// f(z-hat) = (2 pi / L-hat)^2 = f~(z-tilde) tie them to normalized slope
/// lengths.
pub fn slope_profile(z: f64, variant: Variant, tol: f64) -> Result<QuadResult, CalculusError> {
    let p = phi(z, variant, tol)?;
    let value = tube::K * (1.0 - z) * (-p.value).exp();
    Ok(QuadResult {
        value,
        err: value.abs() * p.err + f64::EPSILON * value.abs(),
    })
}

/// Volume-defect lower bound LB(z) = (K/4) * integral of the lower
/// integrand over [z, 1]. Decreasing, nonnegative, zero at z = 1.
pub fn defect_lower_bound(z: f64, tol: f64) -> Result<QuadResult, CalculusError> {
    check_domain(z, tube::packing_floor(), false)?;
    let r = integrate(tube::defect_lb_integrand, z, 1.0, tol)?;
    Ok(QuadResult {
        value: 0.25 * tube::K * r.value,
        err: 0.25 * tube::K * r.err,
    })
}

/// Volume-defect upper bound UB(z) = (K/4) * integral of the upper
/// integrand over [z, 1]. Decreasing, nonnegative, zero at z = 1, and
/// dominated by LB(z).
pub fn defect_upper_bound(z: f64, tol: f64) -> Result<QuadResult, CalculusError> {
    check_domain(z, tube::packing_floor(), false)?;
    let r = integrate(tube::defect_ub_integrand, z, 1.0, tol)?;
    Ok(QuadResult {
        value: 0.25 * tube::K * r.value,
        err: 0.25 * tube::K * r.err,
    })
}

/// One-time cached values of the four monotone maps at the working floor
/// sqrt(1/3): these are the suprema of the invertible ranges.
#[derive(Debug, Clone, Copy)]
pub struct FloorValues {
    pub defect_lower: f64,
    pub defect_upper: f64,
    pub profile_plain: f64,
    pub profile_tilde: f64,
}

static FLOOR_VALUES: LazyLock<FloorValues> = LazyLock::new(|| {
    let z = tube::working_floor();
    FloorValues {
        defect_lower: defect_lower_bound(z, DEFAULT_QUAD_TOL)
            .expect("lower defect integral at the working floor")
            .value,
        defect_upper: defect_upper_bound(z, DEFAULT_QUAD_TOL)
            .expect("upper defect integral at the working floor")
            .value,
        profile_plain: slope_profile(z, Variant::Plain, DEFAULT_QUAD_TOL)
            .expect("plain profile at the working floor")
            .value,
        profile_tilde: slope_profile(z, Variant::Tilde, DEFAULT_QUAD_TOL)
            .expect("tilde profile at the working floor")
            .value,
    }
});

pub fn floor_values() -> &'static FloorValues {
    &FLOOR_VALUES
}

/// Safety margin subtracted from the cached range endpoints before
/// accepting an inversion target, so bracketing can never fail by a
/// quadrature-sized error.
pub const RANGE_PADDING: f64 = 1e-10;

/// The four monotone maps that get inverted by bisection. All are strictly
/// decreasing from their value at sqrt(1/3) down to 0 at z = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotoneMap {
    /// LB: tanh-radius to the volume-defect lower bound.
    DefectLower,
    /// UB: tanh-radius to the volume-defect upper bound.
    DefectUpper,
    /// f: tanh-radius to the plain slope-length profile.
    ProfilePlain,
    /// f~: tanh-radius to the tilde slope-length profile.
    ProfileTilde,
}

impl MonotoneMap {
    pub fn name(self) -> &'static str {
        match self {
            MonotoneMap::DefectLower => "defect lower bound",
            MonotoneMap::DefectUpper => "defect upper bound",
            MonotoneMap::ProfilePlain => "plain slope profile",
            MonotoneMap::ProfileTilde => "tilde slope profile",
        }
    }

    pub fn eval(self, z: f64, tol: f64) -> Result<f64, CalculusError> {
        Ok(match self {
            MonotoneMap::DefectLower => defect_lower_bound(z, tol)?.value,
            MonotoneMap::DefectUpper => defect_upper_bound(z, tol)?.value,
            MonotoneMap::ProfilePlain => slope_profile(z, Variant::Plain, tol)?.value,
            MonotoneMap::ProfileTilde => slope_profile(z, Variant::Tilde, tol)?.value,
        })
    }

    /// Supremum of the invertible range: the cached value at sqrt(1/3).
    pub fn range_sup(self) -> f64 {
        let fv = floor_values();
        match self {
            MonotoneMap::DefectLower => fv.defect_lower,
            MonotoneMap::DefectUpper => fv.defect_upper,
            MonotoneMap::ProfilePlain => fv.profile_plain,
            MonotoneMap::ProfileTilde => fv.profile_tilde,
        }
    }

    /// True when `target` lies strictly inside the invertible range, with
    /// the safety padding applied.
    pub fn accepts(self, target: f64) -> bool {
        target > 0.0 && target < self.range_sup() - RANGE_PADDING
    }
}

/// Invert a decreasing map by bisection on (sqrt(1/3), 1).
///
/// Stops when |map(mid) - target| <= tol * (1 + |target|). Bisection relies
/// on nothing but the monotonicity contract, so it cannot leave the domain.
pub fn invert_monotone(
    map: MonotoneMap,
    target: f64,
    tol: f64,
) -> Result<TanhRadius, CalculusError> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(CalculusError::BadTolerance(tol));
    }
    if !map.accepts(target) {
        return Err(CalculusError::TargetOutOfRange {
            map: map.name(),
            target,
            hi: map.range_sup(),
        });
    }
    let residual_cap = tol * (1.0 + target.abs());
    let mut lo = tube::working_floor();
    let mut hi = 1.0;
    for _ in 0..BISECT_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        let value = map.eval(mid, DEFAULT_QUAD_TOL)?;
        if (value - target).abs() <= residual_cap {
            return Ok(TanhRadius::new(mid).expect("bisection stays interior"));
        }
        if value > target {
            // decreasing map: still above the target, move right
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(CalculusError::BisectionStalled(BISECT_MAX_ITERS))
}
