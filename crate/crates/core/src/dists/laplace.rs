use libm::{exp, fabs, log};

use super::{check_finite, LocScaleParams, LocationFamily, Probability};
use crate::error::Result;

// The absolute value is taken before exp, so density(a + t) and density(a - t)
// are bitwise identical, and so are density(x, a, b) and density(a, x, b).
#[inline]
pub(crate) fn density(x: f64, a: f64, b: f64) -> f64 {
    exp(-fabs(x - a) / b) / (2.0 * b)
}

#[inline]
pub(crate) fn cdf(x: f64, a: f64, b: f64) -> f64 {
    if x <= a {
        0.5 * exp((x - a) / b)
    } else {
        1.0 - 0.5 * exp(-(x - a) / b)
    }
}

#[inline]
pub(crate) fn sf(x: f64, a: f64, b: f64) -> f64 {
    if x >= a {
        0.5 * exp(-(x - a) / b)
    } else {
        1.0 - 0.5 * exp((x - a) / b)
    }
}

#[inline]
pub(crate) fn std_quantile(q: f64) -> f64 {
    if q == 0.5 {
        0.0
    } else if q < 0.5 {
        log(2.0 * q)
    } else {
        -log(2.0 * (1.0 - q))
    }
}

/// Laplace density `exp(-|x - a| / b) / (2b)`.
pub fn laplace_pdf(x: f64, p: &LocScaleParams) -> Result<f64> {
    let x = check_finite("x", x)?;
    Ok(density(x, p.location(), p.scale()))
}

/// Closed-form Laplace CDF. Accepts `x = ±inf`.
pub fn laplace_cdf(x: f64, p: &LocScaleParams) -> Probability {
    Probability::saturating(cdf(x, p.location(), p.scale()))
}

/// Upper tail `P(X > x)`, computed directly rather than as `1 - cdf`.
pub fn laplace_sf(x: f64, p: &LocScaleParams) -> Probability {
    Probability::saturating(sf(x, p.location(), p.scale()))
}

/// Inverse CDF; the median returns the location exactly.
pub fn laplace_quantile(q: Probability, p: &LocScaleParams) -> Result<f64> {
    LocationFamily::Laplace.quantile(q, p)
}

pub fn laplace_sample(p: &LocScaleParams, u: Probability) -> Result<f64> {
    LocationFamily::Laplace.sample(p, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn params(a: f64, b: f64) -> LocScaleParams {
        LocScaleParams::new(a, b).unwrap()
    }

    fn prob(q: f64) -> Probability {
        Probability::new(q).unwrap()
    }

    // e^-1 from its Taylor series, independent of libm.
    fn inv_e() -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..30 {
            term *= -1.0 / k as f64;
            sum += term;
        }
        sum
    }

    fn bisect_cdf(q: f64, p: &LocScaleParams) -> f64 {
        let (mut lo, mut hi) = (
            p.location() - 60.0 * p.scale(),
            p.location() + 60.0 * p.scale(),
        );
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if laplace_cdf(mid, p).get() < q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn pdf_values() {
        assert_eq!(laplace_pdf(0.0, &params(0.0, 1.0)).unwrap(), 0.5);
        let got = laplace_pdf(1.0, &params(0.0, 1.0)).unwrap();
        assert!((got - 0.5 * inv_e()).abs() < 1e-16);
        assert!((got - 0.18393972).abs() < 1e-8);
        assert_eq!(laplace_pdf(0.0, &params(0.0, 4.0)).unwrap(), 0.125);
        assert!(laplace_pdf(f64::NAN, &params(0.0, 1.0)).is_err());
    }

    #[test]
    fn pdf_symmetry_is_exact() {
        let p = params(1.25, 0.3);
        for &t in &[0.0, 1e-9, 0.1, 0.77, 3.0, 41.5] {
            assert_eq!(
                laplace_pdf(1.25 + t, &p).unwrap(),
                laplace_pdf(1.25 - t, &p).unwrap()
            );
        }
    }

    #[test]
    fn cdf_values() {
        let p = params(0.0, 1.0);
        assert_eq!(laplace_cdf(0.0, &p).get(), 0.5);
        assert_eq!(laplace_cdf(3.0, &params(3.0, 7.0)).get(), 0.5);
        assert_eq!(laplace_cdf(f64::INFINITY, &p).get(), 1.0);
        assert_eq!(laplace_cdf(f64::NEG_INFINITY, &p).get(), 0.0);

        // Oracle: composite Simpson of the density on [-40, 0] and [0, 1] plus the
        // exact tail below -40.
        let simpson = |lo: f64, hi: f64, n: usize| {
            let h = (hi - lo) / n as f64;
            let f = |x: f64| 0.5 * libm::exp(-libm::fabs(x));
            let mut s = f(lo) + f(hi);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * f(lo + i as f64 * h);
            }
            s * h / 3.0
        };
        let oracle =
            simpson(-40.0, 0.0, 40_000) + simpson(0.0, 1.0, 2_000) + 0.5 * libm::exp(-40.0);
        let got = laplace_cdf(1.0, &p).get();
        assert!((got - oracle).abs() < 1e-10, "{got} vs {oracle}");
        assert!((got - 0.81606028).abs() < 1e-8);
    }

    #[test]
    fn sf_complements_cdf() {
        let p = params(-2.0, 0.5);
        for &x in &[-10.0, -2.5, -2.0, -1.0, 4.0] {
            let s = laplace_sf(x, &p).get() + laplace_cdf(x, &p).get();
            assert!((s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn quantile_values() {
        assert_eq!(laplace_quantile(prob(0.5), &params(3.0, 2.0)).unwrap(), 3.0);
        let p = params(0.0, 1.0);
        let q25 = laplace_quantile(prob(0.25), &p).unwrap();
        assert!((q25 - bisect_cdf(0.25, &p)).abs() < 1e-12);
        assert!((q25 - -core::f64::consts::LN_2).abs() < 1e-8);
        let q95 = laplace_quantile(prob(0.95), &p).unwrap();
        assert!((q95 - bisect_cdf(0.95, &p)).abs() < 1e-12);
        assert!((q95 - core::f64::consts::LN_10).abs() < 1e-8);
    }

    #[test]
    fn quantile_rejects_closed_endpoints() {
        let p = params(0.0, 1.0);
        assert!(matches!(
            laplace_quantile(prob(0.0), &p),
            Err(Error::Domain { .. })
        ));
        assert!(laplace_quantile(prob(1.0), &p).is_err());
        assert!(laplace_sample(&p, prob(1.0)).is_err());
    }

    #[test]
    fn sample_is_inverse_transform() {
        assert_eq!(laplace_sample(&params(7.0, 1.0), prob(0.5)).unwrap(), 7.0);
        let p = params(0.0, 1.0);
        assert_eq!(
            laplace_sample(&p, prob(0.25)).unwrap(),
            laplace_quantile(prob(0.25), &p).unwrap()
        );
    }
}
