//! Confidence densities obtained by exchanging a distribution's variable and
//! parameter, and the registry of families for which that exchange is valid.
//!
//! For a location family with known scale `b`, the sampling density `f(x; a, b)`
//! read as a function of `a` with `x` fixed at the observation is itself a proper
//! density over `a`. The Laplace, Normal and Cauchy families map to themselves.
//! A Poisson count `n` maps to a Gamma(`n + 1`, 1) density over the rate.
//!
//! Everything here is expressed through two functions of the parameter `θ`:
//! the sampling CDF `F(θ) = P(X <= x̂ | θ)` and the confidence density. Interval
//! mass is `F(θ₁) - F(θ₂)`, and the confidence CDF is `1 - F(θ)`.

mod identity;
mod interval;

pub use identity::{identity_residual, identity_terms, IdentityMethod, IdentityTerms};
pub use interval::{interval_probability, solve_interval, Endpoint, Interval, IntervalKind};

use crate::dists::{gamma, poisson, GammaParams, LocationFamily, Probability};
use crate::error::{Error, Result};

/// A single measured value `x̂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation(f64);

impl Observation {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::Domain {
                name: "observation",
                value,
            })
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Sampling families known to the registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Laplace,
    Normal,
    Cauchy,
    Poisson,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Laplace,
        Family::Normal,
        Family::Cauchy,
        Family::Poisson,
    ];

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "laplace" => Ok(Family::Laplace),
            "normal" => Ok(Family::Normal),
            "cauchy" => Ok(Family::Cauchy),
            "poisson" => Ok(Family::Poisson),
            // The message needs a 'static str; unknown names collapse to one label.
            _ => Err(Error::UnsupportedFamily("unregistered family")),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Laplace => "laplace",
            Family::Normal => "normal",
            Family::Cauchy => "cauchy",
            Family::Poisson => "poisson",
        }
    }

    /// The location family behind a continuous entry, `None` for Poisson.
    pub fn location_family(self) -> Option<LocationFamily> {
        match self {
            Family::Laplace => Some(LocationFamily::Laplace),
            Family::Normal => Some(LocationFamily::Normal),
            Family::Cauchy => Some(LocationFamily::Cauchy),
            Family::Poisson => None,
        }
    }

    /// Which kind of confidence density the exchange produces.
    pub fn dual_kind(self) -> DensityKind {
        match self {
            Family::Laplace => DensityKind::LaplaceLoc,
            Family::Normal => DensityKind::NormalLoc,
            Family::Cauchy => DensityKind::CauchyLoc,
            Family::Poisson => DensityKind::PoissonRate,
        }
    }
}

/// The data a dual is built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evidence {
    /// One continuous observation with a known scale.
    Measurement { obs: Observation, scale: f64 },
    /// One observed Poisson count.
    Count(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DensityKind {
    LaplaceLoc,
    NormalLoc,
    CauchyLoc,
    PoissonRate,
}

impl DensityKind {
    pub fn name(self) -> &'static str {
        match self {
            DensityKind::LaplaceLoc => "laplace_loc",
            DensityKind::NormalLoc => "normal_loc",
            DensityKind::CauchyLoc => "cauchy_loc",
            DensityKind::PoissonRate => "poisson_rate",
        }
    }
}

/// A density over a distribution parameter, fixed by the observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConfidenceDensity {
    Location {
        family: LocationFamily,
        center: f64,
        scale: f64,
    },
    PoissonRate {
        count: u64,
    },
}

/// Builds the confidence density that the registry pairs with `family`.
pub fn dual_of(family: Family, evidence: Evidence) -> Result<ConfidenceDensity> {
    match (family.location_family(), evidence) {
        (Some(loc), Evidence::Measurement { obs, scale }) => {
            ConfidenceDensity::location(loc, obs, scale)
        }
        (None, Evidence::Count(count)) => Ok(ConfidenceDensity::PoissonRate { count }),
        (Some(_), Evidence::Count(_)) => {
            Err(Error::Evidence("location families need a measurement"))
        }
        (None, Evidence::Measurement { .. }) => Err(Error::Evidence("poisson needs a count")),
    }
}

impl ConfidenceDensity {
    pub fn location(family: LocationFamily, obs: Observation, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter {
                name: "scale",
                value: scale,
            });
        }
        Ok(ConfidenceDensity::Location {
            family,
            center: obs.value(),
            scale,
        })
    }

    pub fn kind(&self) -> DensityKind {
        match self {
            ConfidenceDensity::Location { family, .. } => match family {
                LocationFamily::Laplace => DensityKind::LaplaceLoc,
                LocationFamily::Normal => DensityKind::NormalLoc,
                LocationFamily::Cauchy => DensityKind::CauchyLoc,
            },
            ConfidenceDensity::PoissonRate { .. } => DensityKind::PoissonRate,
        }
    }

    /// Lower end of the parameter's support.
    pub fn support_min(&self) -> f64 {
        match self {
            ConfidenceDensity::Location { .. } => f64::NEG_INFINITY,
            ConfidenceDensity::PoissonRate { .. } => 0.0,
        }
    }

    /// The Gamma(`n + 1`, 1) law of the rate, for the Poisson entry.
    pub fn gamma_params(&self) -> Option<GammaParams> {
        match *self {
            ConfidenceDensity::PoissonRate { count } => {
                Some(GammaParams::new(count as f64 + 1.0, 1.0).expect("shape >= 1"))
            }
            _ => None,
        }
    }

    pub(crate) fn check_theta(&self, name: &'static str, theta: f64) -> Result<f64> {
        let ok = match self {
            ConfidenceDensity::Location { .. } => !theta.is_nan(),
            ConfidenceDensity::PoissonRate { .. } => theta >= 0.0,
        };
        if ok {
            Ok(theta)
        } else {
            Err(Error::Domain { name, value: theta })
        }
    }

    /// Unchecked density; `theta` is in the support.
    pub(crate) fn density_raw(&self, theta: f64) -> f64 {
        match *self {
            // Same kernel as the sampling density, with the parameter in the location slot.
            ConfidenceDensity::Location {
                family,
                center,
                scale,
            } => family.density(center, theta, scale),
            ConfidenceDensity::PoissonRate { count } => {
                gamma::density(theta, count as f64 + 1.0, 1.0)
            }
        }
    }

    /// `P(X <= x̂ | θ)`; `θ` may be infinite.
    pub(crate) fn sampling_cdf(&self, theta: f64) -> f64 {
        match *self {
            ConfidenceDensity::Location {
                family,
                center,
                scale,
            } => family.cdf(center, theta, scale),
            ConfidenceDensity::PoissonRate { count } => poisson::cdf_raw(count, theta),
        }
    }

    /// `P(X > x̂ | θ)`, which is also the confidence CDF at `θ`.
    pub(crate) fn sampling_sf(&self, theta: f64) -> f64 {
        match *self {
            ConfidenceDensity::Location {
                family,
                center,
                scale,
            } => family.sf(center, theta, scale),
            ConfidenceDensity::PoissonRate { count } => poisson::sf_raw(count, theta),
        }
    }

    /// Confidence mass below `θ`.
    pub fn confidence_cdf(&self, theta: f64) -> Result<Probability> {
        let theta = self.check_theta("theta", theta)?;
        Ok(Probability::saturating(self.sampling_sf(theta)))
    }

    /// Inverse of the confidence CDF, `0 < q < 1`.
    pub fn confidence_quantile(&self, q: Probability) -> Result<f64> {
        match *self {
            ConfidenceDensity::Location {
                family,
                center,
                scale,
            } => {
                let q = q.open("level")?;
                if q == 0.5 {
                    Ok(center)
                } else {
                    Ok(center + scale * family.std_quantile(q))
                }
            }
            ConfidenceDensity::PoissonRate { .. } => {
                gamma::gamma_quantile(q, &self.gamma_params().expect("poisson entry"))
            }
        }
    }
}

/// Evaluates the confidence density at `theta`.
pub fn confidence_density(cd: &ConfidenceDensity, theta: f64) -> Result<f64> {
    let theta = cd.check_theta("theta", theta)?;
    if !theta.is_finite() {
        return Err(Error::Domain {
            name: "theta",
            value: theta,
        });
    }
    Ok(cd.density_raw(theta))
}

/// Finite-difference comparison of `-dF(θ)/dθ` with the confidence density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdCheck {
    pub fd_estimate: f64,
    pub exact: f64,
    pub abs_error: f64,
}

/// Central difference `-(F(a + h) - F(a - h)) / 2h` of the sampling CDF at the
/// observation, against the confidence density at `a`. The only density whose
/// interval masses reproduce the boundary terms for every `(a₁, a₂)` is this
/// derivative, so the two agree to `O(h²)` away from non-smooth points.
pub fn uniqueness_fd_check(cd: &ConfidenceDensity, a: f64, h: f64) -> Result<FdCheck> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain {
            name: "h",
            value: h,
        });
    }
    let exact = confidence_density(cd, a)?;
    cd.check_theta("a - h", a - h)?;
    let fd_estimate = -(cd.sampling_cdf(a + h) - cd.sampling_cdf(a - h)) / (2.0 * h);
    Ok(FdCheck {
        fd_estimate,
        exact,
        abs_error: libm::fabs(fd_estimate - exact),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dists::{gamma_pdf, laplace_pdf, LocScaleParams};

    fn laplace_cd(xhat: f64, b: f64) -> ConfidenceDensity {
        dual_of(
            Family::Laplace,
            Evidence::Measurement {
                obs: Observation::new(xhat).unwrap(),
                scale: b,
            },
        )
        .unwrap()
    }

    #[test]
    fn peak_value() {
        assert_eq!(
            confidence_density(&laplace_cd(1.3, 2.0), 1.3).unwrap(),
            0.25
        );
    }

    #[test]
    fn exchange_is_bitwise() {
        for &(x, a, b) in &[(0.0, 0.7, 1.0), (-3.1, 2.2, 0.4), (1e3, 999.5, 7.0)] {
            let cd = laplace_cd(x, b);
            let swapped = laplace_pdf(x, &LocScaleParams::new(a, b).unwrap()).unwrap();
            let direct = laplace_pdf(a, &LocScaleParams::new(x, b).unwrap()).unwrap();
            let got = confidence_density(&cd, a).unwrap();
            assert_eq!(got.to_bits(), swapped.to_bits());
            assert_eq!(got.to_bits(), direct.to_bits());
        }
    }

    #[test]
    fn poisson_rate_density() {
        let cd = dual_of(Family::Poisson, Evidence::Count(2)).unwrap();
        for &lam in &[0.0, 0.5, 2.0, 7.0] {
            let want = lam * lam * libm::exp(-lam) / 2.0;
            assert!((confidence_density(&cd, lam).unwrap() - want).abs() < 1e-15);
        }
        assert!(confidence_density(&cd, -0.1).is_err());
        let g = cd.gamma_params().unwrap();
        assert_eq!(
            confidence_density(&cd, 3.3).unwrap(),
            gamma_pdf(3.3, &g).unwrap()
        );
    }

    #[test]
    fn registry_entries() {
        let cd = laplace_cd(2.5, 1.0);
        assert_eq!(
            cd,
            ConfidenceDensity::Location {
                family: LocationFamily::Laplace,
                center: 2.5,
                scale: 1.0
            }
        );
        let n = dual_of(
            Family::Normal,
            Evidence::Measurement {
                obs: Observation::new(0.0).unwrap(),
                scale: 3.0,
            },
        )
        .unwrap();
        assert_eq!(n.kind(), DensityKind::NormalLoc);
        let p = dual_of(Family::Poisson, Evidence::Count(0)).unwrap();
        assert_eq!(p.kind(), DensityKind::PoissonRate);
        assert_eq!(p.gamma_params().unwrap().shape(), 1.0);
        for lam in [0.0, 0.4, 3.0] {
            assert!((confidence_density(&p, lam).unwrap() - libm::exp(-lam)).abs() < 1e-16);
        }
        for f in Family::ALL {
            assert_eq!(f.dual_kind().name().split('_').next().unwrap(), f.name());
        }
    }

    #[test]
    fn registry_errors() {
        assert!(matches!(
            Family::from_name("gamma"),
            Err(Error::UnsupportedFamily(_))
        ));
        assert!(dual_of(
            Family::Poisson,
            Evidence::Measurement {
                obs: Observation::new(1.0).unwrap(),
                scale: 1.0
            }
        )
        .is_err());
        assert!(dual_of(Family::Laplace, Evidence::Count(3)).is_err());
        assert!(dual_of(
            Family::Cauchy,
            Evidence::Measurement {
                obs: Observation::new(1.0).unwrap(),
                scale: 0.0
            }
        )
        .is_err());
        assert!(Observation::new(f64::NAN).is_err());
    }

    #[test]
    fn fd_check_examples() {
        let cd = laplace_cd(0.0, 1.0);
        let r = uniqueness_fd_check(&cd, 0.7, 1e-5).unwrap();
        // 0.5 * e^-0.7
        assert!((r.exact - 0.24829265).abs() < 1e-8);
        assert!(r.abs_error <= 1e-9, "{r:?}");
        let r = uniqueness_fd_check(&cd, -1.3, 1e-5).unwrap();
        assert!(r.abs_error <= 1e-9, "{r:?}");

        let coarse = uniqueness_fd_check(&cd, 0.7, 1e-4).unwrap().abs_error;
        let fine = uniqueness_fd_check(&cd, 0.7, 5e-5).unwrap().abs_error;
        let ratio = coarse / fine;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn fd_at_kink_averages_slopes() {
        // At a = x̂ the stencil straddles the kink: the estimate is (1 - e^-h) / 2h,
        // the mean of the two one-sided secants, and the error is only O(h).
        let h = 1e-3;
        let r = uniqueness_fd_check(&laplace_cd(0.0, 1.0), 0.0, h).unwrap();
        assert!((r.fd_estimate - (1.0 - libm::exp(-h)) / (2.0 * h)).abs() < 1e-12);
        assert!((r.abs_error - h / 4.0).abs() < 1e-6);
    }

    #[test]
    fn fd_rejects_bad_step() {
        let cd = laplace_cd(0.0, 1.0);
        assert!(uniqueness_fd_check(&cd, 0.3, 0.0).is_err());
        assert!(uniqueness_fd_check(&cd, 0.3, -1e-3).is_err());
        let p = dual_of(Family::Poisson, Evidence::Count(1)).unwrap();
        assert!(uniqueness_fd_check(&p, 0.0, 1e-3).is_err());
        assert!(uniqueness_fd_check(&p, 1.0, 1e-4).unwrap().abs_error < 1e-8);
    }
}
