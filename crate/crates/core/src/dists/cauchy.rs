use core::f64::consts::{FRAC_1_PI, PI};

use libm::{atan, tan};

use super::{check_finite, LocScaleParams, LocationFamily, Probability};
use crate::error::Result;

#[inline]
pub(crate) fn density(x: f64, a: f64, b: f64) -> f64 {
    let z = (x - a) / b;
    FRAC_1_PI / (b * (1.0 + z * z))
}

#[inline]
pub(crate) fn cdf(x: f64, a: f64, b: f64) -> f64 {
    0.5 + atan((x - a) / b) * FRAC_1_PI
}

#[inline]
pub(crate) fn sf(x: f64, a: f64, b: f64) -> f64 {
    0.5 - atan((x - a) / b) * FRAC_1_PI
}

#[inline]
pub(crate) fn std_quantile(q: f64) -> f64 {
    if q == 0.5 {
        0.0
    } else {
        tan(PI * (q - 0.5))
    }
}

pub fn cauchy_pdf(x: f64, p: &LocScaleParams) -> Result<f64> {
    let x = check_finite("x", x)?;
    Ok(density(x, p.location(), p.scale()))
}

pub fn cauchy_cdf(x: f64, p: &LocScaleParams) -> Probability {
    Probability::saturating(cdf(x, p.location(), p.scale()))
}

pub fn cauchy_quantile(q: Probability, p: &LocScaleParams) -> Result<f64> {
    LocationFamily::Cauchy.quantile(q, p)
}

pub fn cauchy_sample(p: &LocScaleParams, u: Probability) -> Result<f64> {
    LocationFamily::Cauchy.sample(p, u)
}
