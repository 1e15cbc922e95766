//! Gamma distribution by shape and rate.
//!
//! Integer shapes `k` (up to 10^4) use the Poisson tail identity
//! `F(t) = 1 - sum_{j<k} exp(-rt) (rt)^j / j!`; other shapes use the regularized
//! incomplete gamma function from [`super::special`].

use libm::{exp, lgamma, log};

use super::special::{regularized_lower_gamma, regularized_upper_gamma};
use super::{poisson, GammaParams, Probability};
use crate::error::{Error, Result};
use crate::roots;

const INTEGER_SHAPE_LIMIT: f64 = 1e4;

fn integer_shape(g: &GammaParams) -> Option<u64> {
    let s = g.shape();
    (s <= INTEGER_SHAPE_LIMIT && s == libm::floor(s)).then_some(s as u64)
}

fn check_t(t: f64) -> Result<f64> {
    if t >= 0.0 {
        Ok(t)
    } else {
        Err(Error::Domain {
            name: "t",
            value: t,
        })
    }
}

pub(crate) fn density(t: f64, shape: f64, rate: f64) -> f64 {
    if t == 0.0 {
        return if shape < 1.0 {
            f64::INFINITY
        } else if shape == 1.0 {
            rate
        } else {
            0.0
        };
    }
    exp(shape * log(rate) + (shape - 1.0) * log(t) - rate * t - lgamma(shape))
}

pub(crate) fn cdf_raw(t: f64, g: &GammaParams) -> f64 {
    let x = g.rate() * t;
    match integer_shape(g) {
        Some(k) => poisson::sf_raw(k - 1, x),
        None => regularized_lower_gamma(g.shape(), x),
    }
}

pub(crate) fn sf_raw(t: f64, g: &GammaParams) -> f64 {
    let x = g.rate() * t;
    match integer_shape(g) {
        Some(k) => poisson::cdf_raw(k - 1, x),
        None => regularized_upper_gamma(g.shape(), x),
    }
}

pub fn gamma_pdf(t: f64, g: &GammaParams) -> Result<f64> {
    let t = check_t(t)?;
    Ok(density(t, g.shape(), g.rate()))
}

/// `P(T <= t)`; `t = +inf` is accepted.
pub fn gamma_cdf(t: f64, g: &GammaParams) -> Result<Probability> {
    let t = check_t(t)?;
    Ok(Probability::saturating(cdf_raw(t, g)))
}

/// `P(T > t)`.
pub fn gamma_sf(t: f64, g: &GammaParams) -> Result<Probability> {
    let t = check_t(t)?;
    Ok(Probability::saturating(sf_raw(t, g)))
}

/// Inverse CDF for `0 < q < 1`. Solves on the CDF below the median and on the
/// survival function above it, so both tails keep their absolute accuracy.
pub fn gamma_quantile(q: Probability, g: &GammaParams) -> Result<f64> {
    let q = q.open("quantile level")?;
    let g = *g;
    let f = move |t: f64| {
        if q <= 0.5 {
            cdf_raw(t, &g) - q
        } else {
            (1.0 - q) - sf_raw(t, &g)
        }
    };
    let mean = g.shape() / g.rate();
    let mut hi = 2.0 * mean + 1.0 / g.rate();
    while f(hi) < 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::RootNotFound("gamma quantile"));
        }
    }
    let df = move |t: f64| density(t, g.shape(), g.rate());
    Ok(roots::newton_bracketed(f, df, 0.0, hi, mean.min(hi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gp(shape: f64, rate: f64) -> GammaParams {
        GammaParams::new(shape, rate).unwrap()
    }

    #[test]
    fn exponential_special_case() {
        let g = gp(1.0, 1.0);
        for &t in &[0.0, 0.3, 1.0, 7.5] {
            let d = gamma_pdf(t, &g).unwrap();
            assert!((d - libm::exp(-t)).abs() <= 1e-16, "t={t}");
        }
        let c = gamma_cdf(1.0, &g).unwrap().get();
        assert!((c - (1.0 - libm::exp(-1.0))).abs() < 1e-16);
        assert!((c - 0.63212056).abs() < 1e-8);
    }

    #[test]
    fn density_at_origin() {
        assert_eq!(gamma_pdf(0.0, &gp(0.5, 1.0)).unwrap(), f64::INFINITY);
        assert_eq!(gamma_pdf(0.0, &gp(1.0, 3.0)).unwrap(), 3.0);
        assert_eq!(gamma_pdf(0.0, &gp(2.0, 3.0)).unwrap(), 0.0);
    }

    #[test]
    fn negative_argument_is_rejected() {
        assert!(gamma_pdf(-1e-12, &gp(2.0, 1.0)).is_err());
        assert!(gamma_cdf(-1.0, &gp(2.0, 1.0)).is_err());
        assert!(gamma_cdf(f64::NAN, &gp(2.0, 1.0)).is_err());
    }

    #[test]
    fn shape_three_against_poisson_tail() {
        let g = gp(3.0, 1.0);
        for &t in &[0.1, 1.0, 5.0, 20.0] {
            let tail: f64 = (0..3).map(|j| poisson::pmf_raw(j, t)).sum();
            assert!((gamma_cdf(t, &g).unwrap().get() - (1.0 - tail)).abs() < 1e-12);
        }
    }

    #[test]
    fn integer_path_matches_incomplete_gamma() {
        for k in 1..=20 {
            let g = gp(k as f64, 1.0);
            for &t in &[0.1, 1.0, 5.0, 20.0] {
                let a = gamma_cdf(t, &g).unwrap().get();
                let b = regularized_lower_gamma(k as f64, t);
                assert!((a - b).abs() < 1e-12, "k={k} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn rate_scales_argument() {
        let a = gamma_cdf(2.0, &gp(2.5, 3.0)).unwrap().get();
        let b = gamma_cdf(6.0, &gp(2.5, 1.0)).unwrap().get();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn quantile_round_trip() {
        for &shape in &[1.0, 3.0, 2.5, 11.0] {
            let g = gp(shape, 1.5);
            for &q in &[1e-6, 0.025, 0.5, 0.9, 0.999999] {
                let t = gamma_quantile(Probability::new(q).unwrap(), &g).unwrap();
                let back = gamma_cdf(t, &g).unwrap().get();
                assert!((back - q).abs() < 1e-12, "shape {shape} q {q}: {back}");
            }
        }
        // 1 - exp(-t) = 0.95
        let t = gamma_quantile(Probability::new(0.95).unwrap(), &gp(1.0, 1.0)).unwrap();
        assert!((t - 2.995732273553991).abs() < 1e-12);
    }
}
