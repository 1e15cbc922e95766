//! Distribution primitives for every family that appears in the duality registry.
//!
//! Parameters are validated once, at construction. Every function below that takes a
//! [`LocScaleParams`] or [`GammaParams`] may therefore assume a finite location and
//! strictly positive, finite scale/shape/rate.

mod cauchy;
pub(crate) mod gamma;
mod laplace;
mod normal;
pub(crate) mod poisson;
pub mod special;

pub use cauchy::{cauchy_cdf, cauchy_pdf, cauchy_quantile, cauchy_sample};
pub use gamma::{gamma_cdf, gamma_pdf, gamma_quantile, gamma_sf};
pub use laplace::{laplace_cdf, laplace_pdf, laplace_quantile, laplace_sample, laplace_sf};
pub use normal::{normal_cdf, normal_pdf, normal_quantile, normal_sample};
pub use poisson::{poisson_cdf, poisson_pmf, poisson_sample};

use crate::error::{Error, Result};

/// Location `a` and scale `b > 0` of a location-scale family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocScaleParams {
    location: f64,
    scale: f64,
}

impl LocScaleParams {
    pub fn new(location: f64, scale: f64) -> Result<Self> {
        if !location.is_finite() {
            return Err(Error::InvalidParameter {
                name: "location",
                value: location,
            });
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter {
                name: "scale",
                value: scale,
            });
        }
        Ok(Self { location, scale })
    }

    #[inline]
    pub fn location(&self) -> f64 {
        self.location
    }

    #[inline]
    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// Shape and rate of a Gamma distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    shape: f64,
    rate: f64,
}

impl GammaParams {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !(shape.is_finite() && shape > 0.0) {
            return Err(Error::InvalidParameter {
                name: "shape",
                value: shape,
            });
        }
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidParameter {
                name: "rate",
                value: rate,
            });
        }
        Ok(Self { shape, rate })
    }

    #[inline]
    pub fn shape(&self) -> f64 {
        self.shape
    }

    #[inline]
    pub fn rate(&self) -> f64 {
        self.rate
    }
}

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::Domain {
                name: "probability",
                value,
            })
        }
    }

    /// Clamps round-off excursions outside `[0, 1]`. NaN maps to 0.
    pub(crate) fn saturating(value: f64) -> Self {
        if value >= 1.0 {
            Self(1.0)
        } else if value > 0.0 {
            Self(value)
        } else {
            Self(0.0)
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// Rejects the closed endpoints; quantiles and samplers need `0 < q < 1`.
    pub(crate) fn open(self, name: &'static str) -> Result<f64> {
        if self.0 > 0.0 && self.0 < 1.0 {
            Ok(self.0)
        } else {
            Err(Error::Domain {
                name,
                value: self.0,
            })
        }
    }
}

fn check_finite(name: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Domain { name, value: x })
    }
}

/// The symmetric location families whose location parameter is self-dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocationFamily {
    Laplace,
    Normal,
    Cauchy,
}

impl LocationFamily {
    pub fn name(self) -> &'static str {
        match self {
            LocationFamily::Laplace => "laplace",
            LocationFamily::Normal => "normal",
            LocationFamily::Cauchy => "cauchy",
        }
    }

    /// Density at `x` for location `a` and scale `b`. Unchecked: `b > 0` assumed.
    #[inline]
    pub(crate) fn density(self, x: f64, a: f64, b: f64) -> f64 {
        match self {
            LocationFamily::Laplace => laplace::density(x, a, b),
            LocationFamily::Normal => normal::density(x, a, b),
            LocationFamily::Cauchy => cauchy::density(x, a, b),
        }
    }

    /// `P(X <= x)` for location `a`; `a` may be infinite.
    #[inline]
    pub(crate) fn cdf(self, x: f64, a: f64, b: f64) -> f64 {
        match self {
            LocationFamily::Laplace => laplace::cdf(x, a, b),
            LocationFamily::Normal => normal::cdf(x, a, b),
            LocationFamily::Cauchy => cauchy::cdf(x, a, b),
        }
    }

    /// `P(X > x)` for location `a`; `a` may be infinite.
    #[inline]
    pub(crate) fn sf(self, x: f64, a: f64, b: f64) -> f64 {
        match self {
            LocationFamily::Laplace => laplace::sf(x, a, b),
            LocationFamily::Normal => normal::sf(x, a, b),
            LocationFamily::Cauchy => cauchy::sf(x, a, b),
        }
    }

    /// Quantile of the standardized member (location 0, scale 1), `0 < q < 1`.
    #[inline]
    pub(crate) fn std_quantile(self, q: f64) -> f64 {
        match self {
            LocationFamily::Laplace => laplace::std_quantile(q),
            LocationFamily::Normal => normal::std_quantile(q),
            LocationFamily::Cauchy => cauchy::std_quantile(q),
        }
    }

    pub fn pdf(self, x: f64, p: &LocScaleParams) -> Result<f64> {
        let x = check_finite("x", x)?;
        Ok(self.density(x, p.location, p.scale))
    }

    pub fn cdf_at(self, x: f64, p: &LocScaleParams) -> Probability {
        Probability::saturating(self.cdf(x, p.location, p.scale))
    }

    pub fn quantile(self, q: Probability, p: &LocScaleParams) -> Result<f64> {
        let q = q.open("quantile level")?;
        if q == 0.5 {
            return Ok(p.location);
        }
        Ok(p.location + p.scale * self.std_quantile(q))
    }

    /// Inverse-transform draw from a caller-supplied uniform deviate.
    pub fn sample(self, p: &LocScaleParams, u: Probability) -> Result<f64> {
        u.open("uniform deviate")?;
        self.quantile(u, p)
    }
}
