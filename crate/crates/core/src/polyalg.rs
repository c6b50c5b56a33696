//! Exact polynomial algebra over the rationals.
//!
//! Everything in this module is computed with arbitrary-precision rational
//! arithmetic: no floating point enters root counting or root refinement.
//! Real roots are counted with Sturm sequences and isolated roots are
//! narrowed by sign-preserving bisection, so the results are certificates
//! rather than estimates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Errors from root counting and refinement.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    /// A bracket endpoint is a root of the polynomial, so an open-interval
    /// count is ill-defined.
    #[error("bracket endpoint {0} is a root of the polynomial")]
    EndpointIsRoot(String),
    /// The bracket is empty or reversed.
    #[error("invalid bracket: lo must be strictly below hi")]
    InvalidBracket,
    /// Refinement cannot converge to a nonpositive width.
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
    /// The bracket does not isolate a sign change.
    #[error("polynomial does not change sign over the bracket")]
    NoSignChange,
    /// The zero polynomial has no meaningful root count.
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
}

/// A polynomial with exact rational coefficients, stored in ascending
/// degree order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

/// An exact interval certified to contain a root, with the polynomial
/// taking opposite signs at the endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootEnclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootEnclosure {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Midpoint as a float, for handing off to approximate arithmetic.
    pub fn midpoint_f64(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2));
        rational_to_f64(&mid)
    }

    pub fn lo_f64(&self) -> f64 {
        rational_to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        rational_to_f64(&self.hi)
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        let x = match BigRational::from_float(x) {
            Some(r) => r,
            None => return false,
        };
        self.lo <= x && x <= self.hi
    }
}

/// Convert an exact rational to the nearest representable f64 by splitting
/// off the integer part first, so huge numerators cannot overflow.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    let trunc = r.trunc();
    let frac = r - &trunc;
    let int_part = bigint_to_f64(trunc.numer());
    if frac.is_zero() {
        return int_part;
    }
    let scale = BigInt::from(1u64 << 60);
    let scaled = (&frac * BigRational::from_integer(scale)).round();
    int_part + bigint_to_f64(scaled.numer()) / (1u64 << 60) as f64
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    // to_string round-trips exactly for magnitudes below 2^53 and degrades
    // gracefully above, which is all the refinement outputs need.
    n.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

impl RationalPoly {
    /// Build from ascending-degree coefficients; trailing zeros are dropped.
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut p = RationalPoly { coeffs };
        p.normalize();
        p
    }

    /// Convenience constructor from integer coefficients, ascending degree.
    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::from_integers(&[1])
    }

    /// The monomial x.
    pub fn x() -> Self {
        Self::from_integers(&[0, 1])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut result = BigRational::zero();
        for coeff in self.coeffs.iter().rev() {
            result = result * x + coeff;
        }
        result
    }

    /// Approximate evaluation, again by Horner's rule.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut result = 0.0;
        for coeff in self.coeffs.iter().rev() {
            result = result * x + rational_to_f64(coeff);
        }
        result
    }

    /// Exact first derivative.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        Self::new(coeffs)
    }

    /// True when only even powers carry nonzero coefficients.
    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| i % 2 == 0 || c.is_zero())
    }

    /// For an even polynomial p, the polynomial q with q(x^2) = p(x).
    ///
    /// This is what makes exact evaluation at quadratic irrationals
    /// possible: p(sqrt(u)) = q(u) whenever p is even, so values like
    /// p(sqrt(1/3)) stay inside rational arithmetic.
    pub fn even_part_in_square(&self) -> Option<Self> {
        if !self.is_even() {
            return None;
        }
        Some(Self::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self
                .coeffs
                .get(i)
                .cloned()
                .unwrap_or_else(BigRational::zero);
            let b = other
                .coeffs
                .get(i)
                .cloned()
                .unwrap_or_else(BigRational::zero);
            coeffs.push(a + b);
        }
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Exact Euclidean division: self = q * divisor + r with
    /// deg r < deg divisor. Panics on a zero divisor.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead = divisor.leading_coefficient().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading_coefficient().unwrap() / &lead;
            let shift = rd - dd;
            let mut term = vec![BigRational::zero(); shift + 1];
            term[shift] = factor;
            let term = Self::new(term);
            rem = rem.sub(&term.mul(divisor));
            quot = quot.add(&term);
        }
        (quot, rem)
    }

    pub fn remainder(&self, divisor: &Self) -> Self {
        self.divrem(divisor).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.remainder(&b);
            a = b;
            b = r;
        }
        if let Some(lead) = a.leading_coefficient() {
            let inv = BigRational::one() / lead;
            a = a.scale(&inv);
        }
        a
    }

    /// Squarefree part self / gcd(self, self'), monic.
    pub fn squarefree(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            let inv = BigRational::one() / self.leading_coefficient().unwrap();
            return self.scale(&inv);
        }
        let (q, _) = self.divrem(&g);
        let inv = BigRational::one() / q.leading_coefficient().unwrap();
        q.scale(&inv)
    }

    /// Scale to integer coefficients with content 1 and a positive leading
    /// coefficient.
    pub fn primitive_integer(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut denom_lcm = BigInt::one();
        for c in &self.coeffs {
            denom_lcm = num_integer_lcm(&denom_lcm, c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&denom_lcm / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = num_integer_gcd(&content, v);
        }
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let divisor = content * sign;
        Self::new(
            ints.iter()
                .map(|v| BigRational::from_integer(v / &divisor))
                .collect(),
        )
    }
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.gcd(b)
}

fn num_integer_lcm(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.lcm(b)
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            }
            let mag = c.abs();
            match i {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", mag)?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{}", i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Signed evaluation reduced to -1, 0, or 1.
fn sign_at(p: &RationalPoly, x: &BigRational) -> i32 {
    let v = p.eval(x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// The Sturm chain of a squarefree polynomial.
fn sturm_chain(p: &RationalPoly) -> Vec<RationalPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let rem = chain[n - 2].remainder(&chain[n - 1]);
        chain.push(rem.neg());
    }
    chain
}

fn sign_variations(chain: &[RationalPoly], x: &BigRational) -> usize {
    let mut variations = 0;
    let mut last = 0;
    for p in chain {
        let s = sign_at(p, x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            variations += 1;
        }
        last = s;
    }
    variations
}

/// Count the distinct real roots of `p` in the open interval (lo, hi).
///
/// The count is exact: it is the difference of sign variations of the Sturm
/// chain of the squarefree part of `p`. Endpoints must not be roots.
pub fn sturm_count(
    p: &RationalPoly,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<usize, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(PolyError::InvalidBracket);
    }
    if sign_at(p, lo) == 0 {
        return Err(PolyError::EndpointIsRoot(lo.to_string()));
    }
    if sign_at(p, hi) == 0 {
        return Err(PolyError::EndpointIsRoot(hi.to_string()));
    }
    let sf = p.squarefree();
    let chain = sturm_chain(&sf);
    Ok(sign_variations(&chain, lo) - sign_variations(&chain, hi))
}

/// Shrink a sign-changing bracket around an isolated root until its width
/// is at most `tol`, by exact bisection.
///
/// Every intermediate bracket keeps opposite signs at its endpoints, so the
/// returned enclosure is a certificate. If a midpoint happens to hit the
/// root exactly the split point is nudged off-center to preserve the sign
/// invariant.
pub fn refine_root(
    p: &RationalPoly,
    lo: &BigRational,
    hi: &BigRational,
    tol: &BigRational,
) -> Result<RootEnclosure, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(PolyError::InvalidBracket);
    }
    if !tol.is_positive() {
        return Err(PolyError::NonPositiveTolerance);
    }
    let mut slo = sign_at(p, lo);
    let mut shi = sign_at(p, hi);
    if slo == 0 {
        return Err(PolyError::EndpointIsRoot(lo.to_string()));
    }
    if shi == 0 {
        return Err(PolyError::EndpointIsRoot(hi.to_string()));
    }
    if slo == shi {
        return Err(PolyError::NoSignChange);
    }
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let off_center = BigRational::new(BigInt::from(401), BigInt::from(1024));
    while &hi - &lo > *tol {
        let width = &hi - &lo;
        let mut mid = &lo + &width * &half;
        let mut smid = sign_at(p, &mid);
        if smid == 0 {
            // Exact hit: split off-center instead, keeping a strict sign
            // change on the surviving half.
            mid = &lo + &width * &off_center;
            smid = sign_at(p, &mid);
            debug_assert!(smid != 0);
        }
        if smid == slo {
            lo = mid;
            slo = smid;
        } else {
            hi = mid;
            shi = smid;
        }
        debug_assert_eq!(slo * shi, -1);
    }
    Ok(RootEnclosure { lo, hi })
}

/// Evaluate p at sqrt(u) exactly, returning (a, b) with p(sqrt(u)) = a + b*sqrt(u).
///
/// Horner's rule in the quadratic extension Q(sqrt(u)): multiplying a value
/// a + b*sqrt(u) by sqrt(u) gives b*u + a*sqrt(u).
pub fn eval_at_sqrt(p: &RationalPoly, u: &BigRational) -> (BigRational, BigRational) {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for coeff in p.coeffs().iter().rev() {
        let new_a = &b * u + coeff;
        let new_b = a;
        a = new_a;
        b = new_b;
    }
    (a, b)
}

fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// The exact rational square root of u, when it exists.
pub fn rational_sqrt(u: &BigRational) -> Option<BigRational> {
    let n = is_perfect_square(u.numer())?;
    let d = is_perfect_square(u.denom())?;
    Some(BigRational::new(n, d))
}

/// A univariate rational function with exact coefficients, kept in lowest
/// terms with a primitive integer denominator.
#[derive(Debug, Clone)]
pub struct RationalFn {
    numer: RationalPoly,
    denom: RationalPoly,
}

impl RationalFn {
    pub fn new(numer: RationalPoly, denom: RationalPoly) -> Result<Self, PolyError> {
        if denom.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(Self { numer, denom }.reduce())
    }

    pub fn from_poly(p: RationalPoly) -> Self {
        Self {
            numer: p,
            denom: RationalPoly::one(),
        }
    }

    pub fn from_integers(numer: &[i64], denom: &[i64]) -> Self {
        Self::new(
            RationalPoly::from_integers(numer),
            RationalPoly::from_integers(denom),
        )
        .expect("nonzero denominator")
    }

    pub fn numer(&self) -> &RationalPoly {
        &self.numer
    }

    pub fn denom(&self) -> &RationalPoly {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    fn reduce(self) -> Self {
        if self.numer.is_zero() {
            return Self {
                numer: RationalPoly::zero(),
                denom: RationalPoly::one(),
            };
        }
        let g = self.numer.gcd(&self.denom);
        let (numer, denom) = if g.degree().is_some_and(|d| d > 0) {
            (self.numer.divrem(&g).0, self.denom.divrem(&g).0)
        } else {
            (self.numer, self.denom)
        };
        // scale so the denominator is a primitive integer polynomial with a
        // positive leading coefficient
        let canon = denom.primitive_integer();
        let factor = canon.leading_coefficient().unwrap() / denom.leading_coefficient().unwrap();
        Self {
            numer: numer.scale(&factor),
            denom: canon,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            numer: self
                .numer
                .mul(&other.denom)
                .add(&other.numer.mul(&self.denom)),
            denom: self.denom.mul(&other.denom),
        }
        .reduce()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            numer: self.numer.neg(),
            denom: self.denom.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            numer: self.numer.mul(&other.numer),
            denom: self.denom.mul(&other.denom),
        }
        .reduce()
    }

    pub fn div(&self, other: &Self) -> Result<Self, PolyError> {
        if other.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(Self {
            numer: self.numer.mul(&other.denom),
            denom: self.denom.mul(&other.numer),
        }
        .reduce())
    }

    pub fn recip(&self) -> Result<Self, PolyError> {
        Self::from_poly(RationalPoly::one()).div(self)
    }

    /// Quotient-rule derivative, reduced.
    pub fn derivative(&self) -> Self {
        let n = &self.numer;
        let d = &self.denom;
        Self {
            numer: n.derivative().mul(d).sub(&n.mul(&d.derivative())),
            denom: d.mul(d),
        }
        .reduce()
    }

    /// Exact value at a rational point; None at a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let dv = self.denom.eval(x);
        if dv.is_zero() {
            return None;
        }
        Some(self.numer.eval(x) / dv)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.numer.eval_f64(x) / self.denom.eval_f64(x)
    }

    /// Exact value at sqrt(u) as (a, b) with value = a + b*sqrt(u);
    /// None at a pole. For irrational sqrt(u) the representation is unique.
    pub fn eval_at_sqrt(&self, u: &BigRational) -> Option<(BigRational, BigRational)> {
        if let Some(root) = rational_sqrt(u) {
            return self.eval(&root).map(|v| (v, BigRational::zero()));
        }
        let (an, bn) = eval_at_sqrt(&self.numer, u);
        let (ad, bd) = eval_at_sqrt(&self.denom, u);
        if ad.is_zero() && bd.is_zero() {
            return None;
        }
        // rationalize: multiply through by the conjugate ad - bd*sqrt(u)
        let disc = &ad * &ad - &bd * &bd * u;
        debug_assert!(!disc.is_zero());
        let a = (&an * &ad - &bn * &bd * u) / &disc;
        let b = (&bn * &ad - &an * &bd) / &disc;
        Some((a, b))
    }
}

impl PartialEq for RationalFn {
    /// Mathematical equality by cross-multiplication, independent of
    /// normalization.
    fn eq(&self, other: &Self) -> bool {
        self.numer.mul(&other.denom) == other.numer.mul(&self.denom)
    }
}

impl Eq for RationalFn {}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numer, self.denom)
    }
}

/// Parse a decimal string ("0.125", "-3", "1e-12") into an exact rational.
pub fn rational_from_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if frac_part.contains(['+', '-']) {
        return None;
    }
    let digits: String = format!("{}{}", int_part, frac_part);
    if digits.is_empty() || digits == "-" || digits == "+" {
        return None;
    }
    let numer: BigInt = digits.parse().ok()?;
    let mut value = BigRational::new(numer, BigInt::from(10).pow(frac_part.len() as u32));
    let ten = BigRational::from_integer(BigInt::from(10));
    match exp.cmp(&0) {
        std::cmp::Ordering::Greater => {
            for _ in 0..exp {
                value *= &ten;
            }
        }
        std::cmp::Ordering::Less => {
            for _ in 0..-exp {
                value /= &ten;
            }
        }
        std::cmp::Ordering::Equal => {}
    }
    Some(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    // z^4 + 4 z^2 - 1, the polynomial whose positive root is the lower edge
    // of the tanh-radius domain.
    fn quartic() -> RationalPoly {
        RationalPoly::from_integers(&[-1, 0, 4, 0, 1])
    }

    // 5 z^8 - 6 z^6 + 88 z^4 - 26 z^2 + 3, the sign witness behind the
    // lower-integrand monotonicity.
    fn octic() -> RationalPoly {
        RationalPoly::from_integers(&[3, 0, -26, 0, 88, 0, -6, 0, 5])
    }

    #[test]
    fn eval_basics() {
        let p = quartic();
        assert_eq!(p.eval(&int(0)), int(-1));
        assert_eq!(p.eval(&int(1)), int(4));
        assert_eq!(octic().eval(&int(0)), int(3));
    }

    #[test]
    fn eval_even_at_square() {
        // p(z) = z^4 + 4 z^2 - 1 at z = sqrt(1/3): substitute z^2 = 1/3.
        let q = quartic().even_part_in_square().unwrap();
        assert_eq!(q.eval(&rat(1, 3)), rat(4, 9));
        // odd polynomial has no even form
        assert!(RationalPoly::from_integers(&[0, 1])
            .even_part_in_square()
            .is_none());
    }

    #[test]
    fn derivative_basics() {
        let p = quartic();
        assert_eq!(p.derivative(), RationalPoly::from_integers(&[0, 8, 0, 4]));
        assert!(RationalPoly::from_integers(&[7]).derivative().is_zero());
        assert_eq!(
            RationalPoly::from_integers(&[0, 0, 1]).derivative(),
            RationalPoly::from_integers(&[0, 2])
        );
    }

    #[test]
    fn divrem_reconstructs() {
        let a = RationalPoly::from_integers(&[1, -5, 0, 2, 3]);
        let b = RationalPoly::from_integers(&[-1, 2, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_shared_factor() {
        let shared = RationalPoly::from_integers(&[-2, 0, 1]); // z^2 - 2
        let a = shared.mul(&RationalPoly::from_integers(&[1, 1]));
        let b = shared.mul(&RationalPoly::from_integers(&[3, 0, 1]));
        let g = a.gcd(&b);
        assert_eq!(g, shared); // already monic
    }

    #[test]
    fn sturm_count_known_roots() {
        // z^2 - 2 on (1, 2): exactly sqrt(2)
        let p = RationalPoly::from_integers(&[-2, 0, 1]);
        assert_eq!(sturm_count(&p, &int(1), &int(2)).unwrap(), 1);
        assert_eq!(sturm_count(&p, &int(2), &int(3)).unwrap(), 0);
        // quartic has one root in (0, 1)
        assert_eq!(sturm_count(&quartic(), &int(0), &int(1)).unwrap(), 1);
        // the octic sign witness has no roots between 7/12 and 1
        assert_eq!(sturm_count(&octic(), &rat(7, 12), &int(1)).unwrap(), 0);
        // z^4 - 10 z^2 + 1 has none there either (roots at ~0.318, ~3.146)
        let q = RationalPoly::from_integers(&[1, 0, -10, 0, 1]);
        assert_eq!(sturm_count(&q, &rat(7, 12), &int(1)).unwrap(), 0);
    }

    #[test]
    fn sturm_count_rejects_root_endpoint() {
        let p = RationalPoly::from_integers(&[-1, 0, 1]); // z^2 - 1
        assert!(matches!(
            sturm_count(&p, &int(1), &int(2)),
            Err(PolyError::EndpointIsRoot(_))
        ));
    }

    #[test]
    fn sturm_handles_repeated_roots() {
        // (z - 1)^2 (z + 2): distinct roots 1 and -2
        let p = RationalPoly::from_integers(&[1, -2, 1]).mul(&RationalPoly::from_integers(&[2, 1]));
        assert_eq!(sturm_count(&p, &int(0), &int(3)).unwrap(), 1);
        assert_eq!(sturm_count(&p, &int(-3), &int(3)).unwrap(), 2);
    }

    #[test]
    fn refine_root_sqrt2() {
        let p = RationalPoly::from_integers(&[-2, 0, 1]);
        let tol = rat(1, 1_000_000_000_000);
        let enc = refine_root(&p, &int(1), &int(2), &tol).unwrap();
        assert!(enc.width() <= tol);
        assert!(
            enc.contains_f64(std::f64::consts::SQRT_2) || {
                // the f64 sqrt(2) may sit a hair outside the exact enclosure;
                // the midpoint must still agree to 1e-12
                (enc.midpoint_f64() - std::f64::consts::SQRT_2).abs() < 1e-12
            }
        );
    }

    #[test]
    fn refine_root_domain_edge() {
        // positive root of z^4 + 4 z^2 - 1 is sqrt(sqrt(5) - 2)
        let tol = rat(1, 1_000_000_000_000);
        let enc = refine_root(&quartic(), &int(0), &int(1), &tol).unwrap();
        let expected = (5.0_f64.sqrt() - 2.0).sqrt();
        assert!((enc.midpoint_f64() - expected).abs() < 1e-12);
        // signs stay opposite at the certified endpoints
        assert_eq!(
            quartic().eval(&enc.lo).is_positive(),
            !quartic().eval(&enc.hi).is_positive()
        );
    }

    #[test]
    fn refine_root_rejects_bad_input() {
        let p = RationalPoly::from_integers(&[-2, 0, 1]);
        assert_eq!(
            refine_root(&p, &int(1), &int(2), &int(0)),
            Err(PolyError::NonPositiveTolerance)
        );
        assert_eq!(
            refine_root(&p, &int(2), &int(1), &rat(1, 10)),
            Err(PolyError::InvalidBracket)
        );
        assert_eq!(
            refine_root(&p, &int(2), &int(3), &rat(1, 10)),
            Err(PolyError::NoSignChange)
        );
    }

    #[test]
    fn refine_root_exact_midpoint_hit() {
        // root at 3/2 is hit exactly by the first midpoint of (1, 2)
        let p = RationalPoly::new(vec![rat(-3, 2), int(1)]);
        let tol = rat(1, 1_000_000);
        let enc = refine_root(&p, &int(1), &int(2), &tol).unwrap();
        assert!(enc.lo < rat(3, 2) && rat(3, 2) < enc.hi);
        assert!(enc.width() <= tol);
    }

    #[test]
    fn primitive_integer_normalizes() {
        let p = RationalPoly::new(vec![rat(-1, 2), rat(0, 1), rat(-3, 2)]);
        assert_eq!(
            p.primitive_integer(),
            RationalPoly::from_integers(&[1, 0, 3])
        );
    }

    #[test]
    fn sqrt_evaluation_splits_parity() {
        // z^3 at sqrt(u) = u*sqrt(u): pure odd part
        let p = RationalPoly::from_integers(&[0, 0, 0, 1]);
        let (a, b) = eval_at_sqrt(&p, &rat(1, 3));
        assert_eq!(a, int(0));
        assert_eq!(b, rat(1, 3));
        // even polynomial has no sqrt component
        let (a, b) = eval_at_sqrt(&quartic(), &rat(1, 3));
        assert_eq!(a, rat(4, 9));
        assert_eq!(b, int(0));
    }

    #[test]
    fn rational_sqrt_detection() {
        assert_eq!(rational_sqrt(&rat(4, 9)), Some(rat(2, 3)));
        assert_eq!(rational_sqrt(&rat(1, 3)), None);
        assert_eq!(rational_sqrt(&int(-4)), None);
    }

    #[test]
    fn ratfn_field_ops() {
        // 1/(1-z) + 1/(1+z) = 2/(1-z^2)
        let a = RationalFn::from_integers(&[1], &[1, -1]);
        let b = RationalFn::from_integers(&[1], &[1, 1]);
        let sum = a.add(&b);
        assert_eq!(sum, RationalFn::from_integers(&[2], &[1, 0, -1]));
        // (z^2-1)/(z-1) reduces to z+1
        let r = RationalFn::from_integers(&[-1, 0, 1], &[-1, 1]);
        assert_eq!(r.numer(), &RationalPoly::from_integers(&[1, 1]));
        assert_eq!(r.denom(), &RationalPoly::one());
    }

    #[test]
    fn ratfn_derivative_quotient_rule() {
        // d/dz [1/(1-z)] = 1/(1-z)^2
        let r = RationalFn::from_integers(&[1], &[1, -1]);
        assert_eq!(r.derivative(), RationalFn::from_integers(&[1], &[1, -2, 1]));
    }

    #[test]
    fn ratfn_eval_at_sqrt_rationalizes() {
        // 1/(1+z) at z = sqrt(2): 1/(1+sqrt 2) = sqrt(2) - 1
        let r = RationalFn::from_integers(&[1], &[1, 1]);
        let (a, b) = r.eval_at_sqrt(&int(2)).unwrap();
        assert_eq!(a, int(-1));
        assert_eq!(b, int(1));
        // at a perfect square the result is plain rational: 1/(1+2)
        let (a, b) = r.eval_at_sqrt(&int(4)).unwrap();
        assert_eq!(a, rat(1, 3));
        assert_eq!(b, int(0));
        // pole detection: 1/z at sqrt(0)... use 1/(z^2-2) at sqrt(2)
        let p = RationalFn::from_integers(&[1], &[-2, 0, 1]);
        assert!(p.eval_at_sqrt(&int(2)).is_none());
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(rational_from_decimal("0.1").unwrap(), rat(1, 10));
        assert_eq!(rational_from_decimal("-3").unwrap(), int(-3));
        assert_eq!(rational_from_decimal("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(rational_from_decimal("2.5e2").unwrap(), int(250));
        assert!(rational_from_decimal("abc").is_none());
        assert!(rational_from_decimal("").is_none());
    }

    #[test]
    fn display_readable() {
        assert_eq!(quartic().to_string(), "z^4 + 4*z^2 - 1");
        assert_eq!(RationalPoly::zero().to_string(), "0");
    }

    // Oracle for the Sturm count: build a polynomial from known rational
    // roots and count those roots inside the bracket directly.
    fn poly_from_roots(roots: &[BigRational]) -> RationalPoly {
        let mut p = RationalPoly::one();
        for r in roots {
            p = p.mul(&RationalPoly::new(vec![-r.clone(), BigRational::one()]));
        }
        p
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn sturm_matches_root_construction(
            raw in proptest::collection::vec((-20i64..20, 1i64..8), 1..6),
            lo_n in -25i64..25,
            width_n in 1i64..20,
        ) {
            let roots: Vec<BigRational> = raw.iter().map(|&(n, d)| rat(n, d)).collect();
            let p = poly_from_roots(&roots);
            let lo = rat(2 * lo_n + 1, 2 * 25 * 8); // offset so endpoints dodge roots
            let hi = &lo + rat(width_n, 1);
            prop_assume!(!p.eval(&lo).is_zero() && !p.eval(&hi).is_zero());
            let mut distinct: Vec<&BigRational> = roots
                .iter()
                .filter(|r| **r > lo && **r < hi)
                .collect();
            distinct.sort();
            distinct.dedup();
            let expected = distinct.len();
            prop_assert_eq!(sturm_count(&p, &lo, &hi).unwrap(), expected);
        }

        #[test]
        fn subtraction_of_self_is_zero(
            coeffs in proptest::collection::vec((-50i64..50, 1i64..10), 0..7),
            x_n in -10i64..10,
            x_d in 1i64..10,
        ) {
            let p = RationalPoly::new(coeffs.iter().map(|&(n, d)| rat(n, d)).collect());
            let diff = p.sub(&p);
            prop_assert!(diff.is_zero());
            prop_assert!(diff.eval(&rat(x_n, x_d)).is_zero());
        }

        #[test]
        fn refinement_keeps_sign_change(
            root_n in -40i64..40,
            root_d in 1i64..16,
            spread in 1i64..5,
        ) {
            let root = rat(root_n, root_d);
            let p = poly_from_roots(std::slice::from_ref(&root));
            let lo = &root - rat(spread, 3);
            let hi = &root + rat(spread, 2);
            let tol = rat(1, 1_000_000_000);
            let enc = refine_root(&p, &lo, &hi, &tol).unwrap();
            prop_assert!(enc.lo <= root && root <= enc.hi);
            prop_assert!(enc.width() <= tol);
        }
    }
}
