//! Closed-form geometry functions of the tanh-radius.
//!
//! All functions here are functions of z = tanh(rho), where rho is the
//! radius of an embedded tube around a core geodesic. They are valid on the
//! open interval (sqrt(sqrt(5)-2), 1); every downstream bound additionally
//! assumes z > sqrt(1/3), i.e. a tube radius above artanh(1/sqrt(3)).
//!
//! Each function exists twice: a fast f64 form (this module's top level) and
//! an exact rational-function form (the [`exact`] submodule). The exact
//! forms are derived from the three defining ratios h, g, g~ by rational
//! arithmetic, never transcribed, and the test suite pins the f64 forms to
//! them. That split is deliberate: sign arguments and the handful of exact
//! special values are settled in exact arithmetic, while quadrature and grid
//! sweeps use the f64 forms.

use crate::polyalg::{rational_to_f64, RationalFn, RationalPoly};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Scaling constant for the normalized functions (H = h/K) and the
/// slope-length profiles f = K(1-z)e^{-Phi}.
pub const K: f64 = 3.3957;

/// Lower edge of the tanh-radius domain: the positive root of
/// z^4 + 4z^2 - 1, equal to sqrt(sqrt(5) - 2).
pub fn packing_floor() -> f64 {
    (5.0_f64.sqrt() - 2.0).sqrt()
}

/// tanh of the tube radius artanh(1/sqrt(3)) above which all volume and
/// length bounds are stated: sqrt(1/3).
pub fn working_floor() -> f64 {
    (1.0_f64 / 3.0).sqrt()
}

/// Errors for tanh-radius domain violations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TubeError {
    #[error("tanh-radius {z} outside the open interval ({lo:.6}, 1)")]
    OutOfDomain { z: f64, lo: f64 },
}

/// A validated tanh-radius in the open interval (sqrt(sqrt(5)-2), 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TanhRadius(f64);

impl TanhRadius {
    pub fn new(z: f64) -> Result<Self, TubeError> {
        let lo = packing_floor();
        if z.is_finite() && z > lo && z < 1.0 {
            Ok(TanhRadius(z))
        } else {
            Err(TubeError::OutOfDomain { z, lo })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// True when z > sqrt(1/3): the subrange on which the volume-defect and
    /// core-length bounds are stated.
    pub fn above_working_floor(self) -> bool {
        self.0 > working_floor()
    }
}

/// h(z) = (1+z^2) / (z(1-z^2)).
pub fn h(z: f64) -> f64 {
    let z2 = z * z;
    (1.0 + z2) / (z * (1.0 - z2))
}

/// g(z) = (1+z^2) / (2z^3).
pub fn g(z: f64) -> f64 {
    let z2 = z * z;
    (1.0 + z2) / (2.0 * z2 * z)
}

/// g~(z) = (1+z^2)^2 / (2z^3(3-z^2)).
pub fn g_tilde(z: f64) -> f64 {
    let z2 = z * z;
    let s = 1.0 + z2;
    s * s / (2.0 * z2 * z * (3.0 - z2))
}

/// h'(z) = (z^4 + 4z^2 - 1) / (z^2 (1-z^2)^2), the exact derivative of h.
pub fn h_prime(z: f64) -> f64 {
    let z2 = z * z;
    let w = 1.0 - z2;
    (z2 * z2 + 4.0 * z2 - 1.0) / (z2 * w * w)
}

/// Integrand of Phi: h'/(h+g) - 1/(1-z), in its reduced closed form
/// -(z^4 + 6z^2 + 4z + 1) / ((z+1)(z^2+1)^2).
///
/// Finite on the closed right endpoint z = 1, where it equals -3/2.
pub fn phi_integrand(z: f64) -> f64 {
    let z2 = z * z;
    let s = 1.0 + z2;
    -(z2 * z2 + 6.0 * z2 + 4.0 * z + 1.0) / ((z + 1.0) * s * s)
}

/// Integrand of Phi~: h'/(h-g~) - 1/(1-z), in its reduced closed form
/// M(z) / ((1+z)(1+z^2)(-z^4+6z^2-1)) with
/// M(z) = z^6 + 7z^4 + 12z^3 - 9z^2 - 4z + 1.
///
/// Finite at z = 1, where it equals 1/2. Negative below the root beta of M
/// and positive above it.
pub fn phi_tilde_integrand(z: f64) -> f64 {
    let z2 = z * z;
    let m = ((z2 + 7.0) * z2 + 12.0 * z - 9.0) * z2 - 4.0 * z + 1.0;
    m / ((1.0 + z) * (1.0 + z2) * (-z2 * z2 + 6.0 * z2 - 1.0))
}

/// Integrand of the volume-defect lower bound: h'/(h(h-g~)), in its reduced
/// closed form 2z^2(3-z^2)(z^4+4z^2-1) / ((z^2+1)^2(-z^4+6z^2-1)).
///
/// Equals exactly 1/2 at z = sqrt(1/3) and 1 at z = 1.
pub fn defect_lb_integrand(z: f64) -> f64 {
    let z2 = z * z;
    let s = 1.0 + z2;
    let q = z2 * z2 + 4.0 * z2 - 1.0;
    2.0 * z2 * (3.0 - z2) * q / (s * s * (-z2 * z2 + 6.0 * z2 - 1.0))
}

/// Integrand of the volume-defect upper bound: h'/(h(h+g)), in its reduced
/// closed form 2z^2(z^4+4z^2-1) / (z^2+1)^3.
///
/// Equals exactly 1/8 at z = sqrt(1/3) and 1 at z = 1.
pub fn defect_ub_integrand(z: f64) -> f64 {
    let z2 = z * z;
    let s = 1.0 + z2;
    let q = z2 * z2 + 4.0 * z2 - 1.0;
    2.0 * z2 * q / (s * s * s)
}

/// The seven geometry values at one tanh-radius; the `*_scaled` fields are
/// the same ratios divided by K.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryBundle {
    pub h: f64,
    pub g: f64,
    pub g_tilde: f64,
    pub h_prime: f64,
    pub h_scaled: f64,
    pub g_scaled: f64,
    pub g_tilde_scaled: f64,
}

/// Evaluate the geometry bundle with the default scaling constant.
pub fn eval_geometry(z: TanhRadius) -> GeometryBundle {
    eval_geometry_with_k(z, K)
}

/// Evaluate the geometry bundle with an explicit scaling constant. The
/// non-default path exists for the verification suite's negative control.
pub fn eval_geometry_with_k(z: TanhRadius, k: f64) -> GeometryBundle {
    let z = z.get();
    let (h, g, g_tilde, h_prime) = (h(z), g(z), g_tilde(z), h_prime(z));
    GeometryBundle {
        h,
        g,
        g_tilde,
        h_prime,
        h_scaled: h / k,
        g_scaled: g / k,
        g_tilde_scaled: g_tilde / k,
    }
}

/// Both volume-defect integrands at once.
pub fn eval_integrands(z: TanhRadius) -> (f64, f64) {
    (defect_lb_integrand(z.get()), defect_ub_integrand(z.get()))
}

/// Exact rational-function forms, derived (not transcribed) from the
/// defining ratios.
pub mod exact {
    use super::*;
    use crate::polyalg::PolyError;

    /// h = (1+z^2) / (z - z^3).
    pub fn h() -> RationalFn {
        RationalFn::from_integers(&[1, 0, 1], &[0, 1, 0, -1])
    }

    /// g = (1+z^2) / (2z^3).
    pub fn g() -> RationalFn {
        RationalFn::from_integers(&[1, 0, 1], &[0, 0, 0, 2])
    }

    /// g~ = (1+z^2)^2 / (6z^3 - 2z^5).
    pub fn g_tilde() -> RationalFn {
        RationalFn::from_integers(&[1, 0, 2, 0, 1], &[0, 0, 0, 6, 0, -2])
    }

    /// h' as the exact derivative of h.
    pub fn h_prime() -> RationalFn {
        h().derivative()
    }

    fn one_over_one_minus_z() -> RationalFn {
        RationalFn::from_integers(&[1], &[1, -1])
    }

    /// h'/(h+g) - 1/(1-z), reduced.
    pub fn phi_integrand() -> RationalFn {
        let hsum = h().add(&g());
        h_prime()
            .div(&hsum)
            .expect("h+g is nonzero")
            .sub(&one_over_one_minus_z())
    }

    /// h'/(h-g~) - 1/(1-z), reduced.
    pub fn phi_tilde_integrand() -> RationalFn {
        let hdiff = h().sub(&g_tilde());
        h_prime()
            .div(&hdiff)
            .expect("h-g~ is nonzero")
            .sub(&one_over_one_minus_z())
    }

    /// h'/(h(h-g~)), reduced.
    pub fn defect_lb_integrand() -> RationalFn {
        let denom = h().mul(&h().sub(&g_tilde()));
        h_prime().div(&denom).expect("denominator is nonzero")
    }

    /// h'/(h(h+g)), reduced.
    pub fn defect_ub_integrand() -> RationalFn {
        let denom = h().mul(&h().add(&g()));
        h_prime().div(&denom).expect("denominator is nonzero")
    }

    /// The numerator polynomial of the reduced Phi~ integrand, scaled to
    /// primitive integer coefficients with a positive leading coefficient:
    /// z^6 + 7z^4 + 12z^3 - 9z^2 - 4z + 1.
    ///
    /// Its unique root in (sqrt(1/3), 1) is beta, the minimizer of Phi~.
    pub fn phi_tilde_numerator() -> RationalPoly {
        phi_tilde_integrand().numer().primitive_integer()
    }

    /// z^4 + 4z^2 - 1, whose positive root is the domain edge
    /// sqrt(sqrt(5)-2).
    pub fn domain_quartic() -> RationalPoly {
        RationalPoly::from_integers(&[-1, 0, 4, 0, 1])
    }

    /// Extract the even octic sign core p(z) = 5z^8 - 6z^6 + 88z^4 - 26z^2 + 3
    /// from the derivative of the defect lower-bound integrand:
    /// t'(z) = 4z(1-z^2) p(z) / ((z^2+1)^3 (z^4-6z^2+1)^2).
    ///
    /// The cofactor 4z(1-z^2) and the squared denominator are sign-definite
    /// on the working range, so positivity of t' reduces to positivity of p.
    pub fn lb_derivative_sign_core() -> Result<RationalPoly, PolyError> {
        let cofactor = RationalFn::from_integers(&[0, 4, 0, -4], &conv3_sq());
        extract_poly_factor(&defect_lb_integrand().derivative(), &cofactor)
    }

    /// Extract the quartic sign core z^4 - 10z^2 + 1 from the derivative of
    /// the defect upper-bound integrand:
    /// T'(z) = -4z (z^4 - 10z^2 + 1) / (z^2+1)^4.
    pub fn ub_derivative_sign_core() -> Result<RationalPoly, PolyError> {
        // (z^2+1)^4 = z^8 + 4z^6 + 6z^4 + 4z^2 + 1
        let cofactor = RationalFn::from_integers(&[0, -4], &[1, 0, 4, 0, 6, 0, 4, 0, 1]);
        extract_poly_factor(&defect_ub_integrand().derivative(), &cofactor)
    }

    // (z^2+1)^3 (z^4-6z^2+1)^2, ascending coefficients
    fn conv3_sq() -> Vec<i64> {
        let cube = RationalPoly::from_integers(&[1, 0, 3, 0, 3, 0, 1]);
        let quartic = RationalPoly::from_integers(&[1, 0, -6, 0, 1]);
        let product = cube.mul(&quartic.mul(&quartic));
        product
            .coeffs()
            .iter()
            .map(|c| {
                debug_assert!(c.is_integer());
                i64::try_from(c.to_integer()).expect("small coefficients")
            })
            .collect()
    }

    /// Divide `value` by `cofactor` and demand an exact polynomial quotient.
    fn extract_poly_factor(
        value: &RationalFn,
        cofactor: &RationalFn,
    ) -> Result<RationalPoly, PolyError> {
        let q = value.div(cofactor)?;
        if q.denom().degree() != Some(0) {
            return Err(PolyError::NoSignChange);
        }
        Ok(q.numer().primitive_integer())
    }
}

/// Exact value of an even rational function at sqrt(u), as a plain rational.
///
/// Returns None when the function is not even in the required sense (a
/// nonzero sqrt(u) component survives) or when sqrt(u) is a pole.
pub fn even_value_at_sqrt(f: &RationalFn, u: &BigRational) -> Option<BigRational> {
    let (a, b) = f.eval_at_sqrt(u)?;
    if b != BigRational::from_integer(BigInt::from(0)) {
        return None;
    }
    Some(a)
}

/// Convenience: the exact rational value at sqrt(1/3) of an even rational
/// function, converted to f64.
pub fn value_at_working_floor(f: &RationalFn) -> Option<f64> {
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    even_value_at_sqrt(f, &third).map(|v| rational_to_f64(&v))
}
