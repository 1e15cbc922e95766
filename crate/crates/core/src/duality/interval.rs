use core::fmt;

use libm::log;

use super::ConfidenceDensity;
use crate::dists::Probability;
use crate::error::{Error, Result};
use crate::roots;

/// An interval endpoint; one-sided limits carry an explicit unbounded marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    NegInf,
    Finite(f64),
    PosInf,
}

impl Endpoint {
    pub fn value(self) -> f64 {
        match self {
            Endpoint::NegInf => f64::NEG_INFINITY,
            Endpoint::Finite(v) => v,
            Endpoint::PosInf => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Endpoint::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInf => f.write_str("-inf"),
            Endpoint::Finite(v) => write!(f, "{v}"),
            Endpoint::PosInf => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntervalKind {
    /// Equal confidence mass `(1 - level) / 2` in each tail.
    Central,
    /// Highest-density interval of the requested mass.
    Shortest,
    /// `(support minimum, u]` with mass `level`.
    UpperLimit,
    /// `[l, +inf)` with mass `level`.
    LowerLimit,
}

impl IntervalKind {
    pub fn name(self) -> &'static str {
        match self {
            IntervalKind::Central => "central",
            IntervalKind::Shortest => "shortest",
            IntervalKind::UpperLimit => "upper",
            IntervalKind::LowerLimit => "lower",
        }
    }

    pub fn is_two_sided(self) -> bool {
        matches!(self, IntervalKind::Central | IntervalKind::Shortest)
    }
}

/// A confidence (fiducial) interval for the parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: Endpoint,
    pub upper: Endpoint,
    pub level: f64,
    pub kind: IntervalKind,
}

impl Interval {
    /// Closed-interval membership.
    pub fn contains(&self, theta: f64) -> bool {
        self.lower.value() <= theta && theta <= self.upper.value()
    }

    /// `upper - lower`, or `None` when either side is unbounded.
    pub fn width(&self) -> Option<f64> {
        match (self.lower, self.upper) {
            (Endpoint::Finite(l), Endpoint::Finite(u)) => Some(u - l),
            _ => None,
        }
    }

    /// The confidence mass this interval carries under `cd`.
    pub fn probability(&self, cd: &ConfidenceDensity) -> Result<Probability> {
        interval_probability(cd, self.lower.value(), self.upper.value())
    }
}

/// `P(a₁ <= θ <= a₂ | x̂) = P(X <= x̂ | a₁) - P(X <= x̂ | a₂)`.
///
/// Endpoints may be infinite. Reversed endpoints are an error rather than being
/// swapped, so that a sign mistake upstream cannot be masked.
pub fn interval_probability(cd: &ConfidenceDensity, a1: f64, a2: f64) -> Result<Probability> {
    let a1 = cd.check_theta("a1", a1)?;
    let a2 = cd.check_theta("a2", a2)?;
    if a1 > a2 {
        return Err(Error::Ordering {
            lower: a1,
            upper: a2,
        });
    }
    if a1 == a2 {
        return Ok(Probability::saturating(0.0));
    }
    Ok(Probability::saturating(
        cd.sampling_cdf(a1) - cd.sampling_cdf(a2),
    ))
}

fn check_level(level: f64) -> Result<f64> {
    if level > 0.0 && level < 1.0 {
        Ok(level)
    } else {
        Err(Error::Domain {
            name: "level",
            value: level,
        })
    }
}

fn quantile(cd: &ConfidenceDensity, q: f64) -> Result<f64> {
    cd.confidence_quantile(Probability::new(q)?)
}

/// Constructs the interval of confidence mass `level`.
///
/// For the symmetric location families the shortest interval is the central one and
/// is returned as such. For the Poisson rate it is found by a level-set search on
/// the Gamma density.
pub fn solve_interval(cd: &ConfidenceDensity, level: f64, kind: IntervalKind) -> Result<Interval> {
    let level = check_level(level)?;
    let (lower, upper) = match (*cd, kind) {
        (
            ConfidenceDensity::Location {
                family,
                center,
                scale,
            },
            IntervalKind::Central | IntervalKind::Shortest,
        ) => {
            let half = scale * family.std_quantile(0.5 + 0.5 * level);
            (
                Endpoint::Finite(center - half),
                Endpoint::Finite(center + half),
            )
        }
        (ConfidenceDensity::PoissonRate { .. }, IntervalKind::Central) => (
            Endpoint::Finite(quantile(cd, 0.5 * (1.0 - level))?),
            Endpoint::Finite(quantile(cd, 0.5 + 0.5 * level)?),
        ),
        (ConfidenceDensity::PoissonRate { count }, IntervalKind::Shortest) => {
            let (l, u) = poisson_shortest(cd, count, level)?;
            (Endpoint::Finite(l), Endpoint::Finite(u))
        }
        (_, IntervalKind::UpperLimit) => {
            let lower = match cd {
                ConfidenceDensity::Location { .. } => Endpoint::NegInf,
                ConfidenceDensity::PoissonRate { .. } => Endpoint::Finite(cd.support_min()),
            };
            (lower, Endpoint::Finite(quantile(cd, level)?))
        }
        (_, IntervalKind::LowerLimit) => (
            Endpoint::Finite(quantile(cd, 1.0 - level)?),
            Endpoint::PosInf,
        ),
    };
    Ok(Interval {
        lower,
        upper,
        level,
        kind,
    })
}

// Log of the Gamma(n + 1, 1) density up to its normalizing constant.
fn log_kernel(n: f64, lambda: f64) -> f64 {
    n * log(lambda) - lambda
}

fn left_crossing(n: f64, height: f64) -> f64 {
    roots::newton_bracketed(
        |l| log_kernel(n, l) - height,
        |l| n / l - 1.0,
        0.0,
        n,
        0.5 * n,
    )
}

fn right_crossing(n: f64, height: f64) -> f64 {
    let mut hi = 2.0 * n + 1.0;
    while log_kernel(n, hi) >= height {
        hi *= 2.0;
    }
    roots::newton_bracketed(
        |l| height - log_kernel(n, l),
        |l| 1.0 - n / l,
        n,
        hi,
        n + 0.5 * (hi - n),
    )
}

/// Level-set search: bisect on the (log) density height `c` until the mass between
/// the two crossings of `c` equals `level`. The density of Gamma(1, 1) is maximal at
/// 0, so for `n = 0` the interval touches the boundary. The right endpoint is
/// finally re-solved from the left one so the mass is exact to quantile accuracy.
fn poisson_shortest(cd: &ConfidenceDensity, count: u64, level: f64) -> Result<(f64, f64)> {
    if count == 0 {
        return Ok((0.0, quantile(cd, level)?));
    }
    let n = count as f64;
    let peak = log_kernel(n, n);
    let mass = |height: f64| {
        let l = left_crossing(n, height);
        let r = right_crossing(n, height);
        cd.sampling_cdf(l) - cd.sampling_cdf(r)
    };
    let mut span = 1.0;
    while mass(peak - span) < level {
        span *= 2.0;
        if span > 1e6 {
            return Err(Error::RootNotFound("shortest interval height"));
        }
    }
    // mass is decreasing in height; bisect on -mass + level.
    let height = roots::bisect(|h| level - mass(h), peak - span, peak);
    let lower = left_crossing(n, height);
    let below = cd.sampling_sf(lower);
    let upper = quantile(cd, below + level)?;
    Ok((lower, upper))
}
