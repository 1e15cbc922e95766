//! The unit identity
//!
//! ```text
//! ∫_{x̂}^{∞} f(x; a₁) dx  +  ∫_{a₁}^{a₂} f̃(a; x̂) da  +  ∫_{-∞}^{x̂} f(x; a₂) dx  =  1
//! ```
//!
//! for all `a₁ <= a₂`. The first and third terms are sampling-distribution tails, the
//! middle one is confidence mass. For the Poisson rate the tails are Poisson sums
//! `P(X > n | λ₁)` and `P(X <= n | λ₂)`.
//!
//! Infinite limits are never integrated numerically: the quadrature route integrates
//! a finite window next to `x̂` and adds the closed-form remainder beyond it.

use libm::fabs;

use super::ConfidenceDensity;
use crate::error::{Error, Result};
use crate::quad::{integrate_kinked, DEFAULT_TOL};

/// Width, in scale units, of the window integrated numerically on each tail.
const TAIL_WINDOW: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IdentityMethod {
    ClosedForm,
    /// Adaptive quadrature with the given absolute tolerance per integral.
    Quadrature {
        tol: f64,
    },
}

impl IdentityMethod {
    pub fn quadrature() -> Self {
        IdentityMethod::Quadrature { tol: DEFAULT_TOL }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityTerms {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub sum: f64,
    pub residual: f64,
}

impl IdentityTerms {
    fn new(t1: f64, t2: f64, t3: f64) -> Self {
        let sum = t1 + t2 + t3;
        Self {
            t1,
            t2,
            t3,
            sum,
            residual: fabs(sum - 1.0),
        }
    }
}

fn check_endpoints(cd: &ConfidenceDensity, a1: f64, a2: f64) -> Result<()> {
    for (name, v) in [("a1", a1), ("a2", a2)] {
        cd.check_theta(name, v)?;
        if !v.is_finite() {
            return Err(Error::Domain { name, value: v });
        }
    }
    if a1 > a2 {
        return Err(Error::Ordering {
            lower: a1,
            upper: a2,
        });
    }
    Ok(())
}

/// The three terms of the identity and `|T₁ + T₂ + T₃ − 1|`.
pub fn identity_terms(
    cd: &ConfidenceDensity,
    a1: f64,
    a2: f64,
    method: IdentityMethod,
) -> Result<IdentityTerms> {
    check_endpoints(cd, a1, a2)?;
    match method {
        IdentityMethod::ClosedForm => Ok(IdentityTerms::new(
            cd.sampling_sf(a1),
            cd.sampling_cdf(a1) - cd.sampling_cdf(a2),
            cd.sampling_cdf(a2),
        )),
        IdentityMethod::Quadrature { tol } => quadrature_terms(cd, a1, a2, tol),
    }
}

pub fn identity_residual(
    cd: &ConfidenceDensity,
    a1: f64,
    a2: f64,
    method: IdentityMethod,
) -> Result<f64> {
    identity_terms(cd, a1, a2, method).map(|t| t.residual)
}

fn quadrature_terms(cd: &ConfidenceDensity, a1: f64, a2: f64, tol: f64) -> Result<IdentityTerms> {
    match *cd {
        ConfidenceDensity::Location {
            family,
            center,
            scale,
        } => {
            let t2 = integrate_kinked(|a| cd.density_raw(a), a1, a2, center, tol)?.value;

            // Right tail of the sampling density at a₁, beyond x̂.
            let right_end = center.max(a1) + TAIL_WINDOW * scale;
            let right =
                integrate_kinked(|x| family.density(x, a1, scale), center, right_end, a1, tol)?;
            let t1 = right.value + family.sf(right_end, a1, scale);

            // Left tail of the sampling density at a₂, below x̂.
            let left_end = center.min(a2) - TAIL_WINDOW * scale;
            let left =
                integrate_kinked(|x| family.density(x, a2, scale), left_end, center, a2, tol)?;
            let t3 = left.value + family.cdf(left_end, a2, scale);

            Ok(IdentityTerms::new(t1, t2, t3))
        }
        ConfidenceDensity::PoissonRate { count } => {
            // The Gamma kernel peaks at λ = n; splitting there keeps panels one-sided.
            let t2 = integrate_kinked(|l| cd.density_raw(l), a1, a2, count as f64, tol)?.value;
            Ok(IdentityTerms::new(
                cd.sampling_sf(a1),
                t2,
                cd.sampling_cdf(a2),
            ))
        }
    }
}
