//! Deterministic adaptive quadrature on finite intervals.
//!
//! Each panel `[l, r]` is integrated with the 15-point Gauss-Kronrod rule, both
//! whole and as its two halves. The error estimate is the larger of
//! `|K15(l, r) - (K15(l, m) + K15(m, r))|` and the halves' own `|K15 - G7|` sums;
//! comparing against the halves catches most interior kinks, where `K15` and the
//! embedded `G7` can agree by accident. A kink between a panel's outermost node and
//! its end is invisible to any nodal rule, so known kinks belong in
//! [`integrate_kinked`]. A panel is accepted, with the
//! halves' value, when its estimate is at most `tol * (r - l) / (hi - lo)`, so the
//! accepted estimates sum to at most `tol`. Rejected panels are bisected at their
//! midpoint and the left half is always processed first. Accepted values are summed
//! in left-to-right order, which makes the result a pure function of the inputs.
//!
//! Nodes and weights are the standard QUADPACK `qk15` constants listed below.

use alloc::vec;
use libm::fabs;

use crate::error::{Error, Result};

/// Kronrod abscissae on [-1, 1], non-negative half, decreasing.
/// Odd indices (1, 3, 5) are the 7-point Gauss nodes; index 7 is the centre.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_PANELS: usize = 1_000_000;

/// Outcome of an integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    /// Number of accepted panels in the final partition.
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub tol: f64,
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_panels: DEFAULT_MAX_PANELS,
        }
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, l: f64, r: f64) -> (f64, f64) {
    let centre = 0.5 * (l + r);
    let half = 0.5 * (r - l);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, fabs((kronrod - gauss) * half))
}

fn check_bounds(lo: f64, hi: f64, tol: f64) -> Result<()> {
    if !lo.is_finite() {
        return Err(Error::Domain {
            name: "lo",
            value: lo,
        });
    }
    if !hi.is_finite() {
        return Err(Error::Domain {
            name: "hi",
            value: hi,
        });
    }
    if lo > hi {
        return Err(Error::Ordering {
            lower: lo,
            upper: hi,
        });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Domain {
            name: "tol",
            value: tol,
        });
    }
    Ok(())
}

/// Adaptive integration of `f` over the finite range `[lo, hi]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadResult> {
    integrate_with(
        &f,
        lo,
        hi,
        QuadConfig {
            tol,
            ..QuadConfig::default()
        },
    )
}

pub fn integrate_with<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    config: QuadConfig,
) -> Result<QuadResult> {
    check_bounds(lo, hi, config.tol)?;
    if lo == hi {
        return Ok(QuadResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            subdivisions: 1,
        });
    }
    adapt(f, lo, hi, hi - lo, config.tol, config.max_panels)
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    total_width: f64,
    tol: f64,
    max_panels: usize,
) -> Result<QuadResult> {
    let mut value = 0.0;
    let mut error = 0.0;
    let mut accepted = 0usize;
    let mut evaluated = 1usize;
    // Pending panels with their own K15 value; pushing right then left keeps
    // left-to-right order.
    let mut stack = vec![(lo, hi, gauss_kronrod(f, lo, hi))];
    while let Some((l, r, (whole, whole_err))) = stack.pop() {
        let mid = 0.5 * (l + r);
        if mid <= l || mid >= r {
            value += whole;
            error += whole_err;
            accepted += 1;
            continue;
        }
        let left = gauss_kronrod(f, l, mid);
        let right = gauss_kronrod(f, mid, r);
        evaluated += 2;
        let refined = left.0 + right.0;
        let e = fabs(refined - whole).max(left.1 + right.1);
        if e <= tol * ((r - l) / total_width) {
            value += refined;
            error += e;
            accepted += 1;
            continue;
        }
        if evaluated + 2 * (stack.len() + 2) > max_panels {
            let mut estimate = value + refined;
            let mut err = error + e;
            for &(_, _, (pv, pe)) in stack.iter().rev() {
                estimate += pv;
                err += pe;
            }
            return Err(Error::Convergence {
                estimate,
                abs_error_estimate: err,
                panels: evaluated,
            });
        }
        stack.push((mid, r, right));
        stack.push((l, mid, left));
    }
    Ok(QuadResult {
        value,
        abs_error_estimate: error,
        subdivisions: accepted,
    })
}

/// As [`integrate`], but first splits `[lo, hi]` at `kink` when it lies strictly
/// inside, so that each half sees a smooth integrand. Each half gets the share of
/// `tol` proportional to its width.
pub fn integrate_kinked<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    kink: f64,
    tol: f64,
) -> Result<QuadResult> {
    check_bounds(lo, hi, tol)?;
    if !(kink > lo && kink < hi) {
        return integrate(f, lo, hi, tol);
    }
    let total = hi - lo;
    let max = DEFAULT_MAX_PANELS;
    let left = adapt(&f, lo, kink, total, tol, max)?;
    let right = adapt(
        &f,
        kink,
        hi,
        total,
        tol,
        max.saturating_sub(left.subdivisions),
    )?;
    Ok(QuadResult {
        value: left.value + right.value,
        abs_error_estimate: left.abs_error_estimate + right.abs_error_estimate,
        subdivisions: left.subdivisions + right.subdivisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dists::{laplace_cdf, laplace_pdf, LocScaleParams};

    fn laplace(a: f64, b: f64) -> impl Fn(f64) -> f64 {
        let p = LocScaleParams::new(a, b).unwrap();
        move |x| laplace_pdf(x, &p).unwrap()
    }

    #[test]
    fn weights_sum_to_two() {
        let k: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_exactness() {
        // K15 integrates degree 22 exactly; G7 degree 13.
        let r = integrate(|x: f64| x.powi(12) - 3.0 * x.powi(5), -1.0, 2.0, 1e-12).unwrap();
        let exact = (2f64.powi(13) + 1.0) / 13.0 - 0.5 * (64.0 - 1.0);
        assert!((r.value - exact).abs() < 1e-11);
    }

    #[test]
    fn laplace_normalization() {
        let r = integrate(laplace(0.0, 1.0), -40.0, 40.0, 1e-10).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn laplace_central_mass() {
        let r = integrate(laplace(0.0, 1.0), -1.0, 1.0, 1e-10).unwrap();
        let exact = 1.0 - libm::exp(-1.0);
        assert!((r.value - exact).abs() < 1e-10);
        assert!((r.value - 0.63212056).abs() < 1e-8);
    }

    #[test]
    fn zero_integrand() {
        let r = integrate(|_| 0.0, -3.0, 17.0, 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.abs_error_estimate, 0.0);
        assert!(r.subdivisions >= 1);
    }

    #[test]
    fn degenerate_range_is_zero() {
        let r = integrate(laplace(0.0, 1.0), 2.0, 2.0, 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(matches!(
            integrate(|x| x, 1.0, 0.0, 1e-10),
            Err(Error::Ordering { .. })
        ));
        assert!(integrate(|x| x, 0.0, f64::INFINITY, 1e-10).is_err());
        assert!(integrate(|x| x, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn panel_budget_reports_best_estimate() {
        let f = laplace(0.3, 1.0);
        let cfg = QuadConfig {
            tol: 1e-14,
            max_panels: 8,
        };
        match integrate_with(&f, -1.0, 1.0, cfg) {
            Err(Error::Convergence {
                estimate, panels, ..
            }) => {
                assert!(panels <= 8);
                let p = LocScaleParams::new(0.3, 1.0).unwrap();
                let exact = laplace_cdf(1.0, &p).get() - laplace_cdf(-1.0, &p).get();
                assert!((estimate - exact).abs() < 1e-3);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn kink_split_reduces_work() {
        // The kink at 0.3 is not a dyadic point of [-1, 1], so plain bisection has
        // to refine around it while the split version does not.
        let f = laplace(0.3, 1.0);
        let plain = integrate(&f, -1.0, 1.0, 1e-10).unwrap();
        let split = integrate_kinked(&f, -1.0, 1.0, 0.3, 1e-10).unwrap();
        let p = LocScaleParams::new(0.3, 1.0).unwrap();
        let exact = laplace_cdf(1.0, &p).get() - laplace_cdf(-1.0, &p).get();
        assert!((plain.value - exact).abs() < 1e-10);
        assert!((split.value - exact).abs() < 1e-10);
        assert!(2 * split.subdivisions <= plain.subdivisions);
    }

    #[test]
    fn kink_at_dyadic_midpoint() {
        let f = laplace(0.0, 1.0);
        let plain = integrate(&f, -1.0, 1.0, 1e-10).unwrap();
        let split = integrate_kinked(&f, -1.0, 1.0, 0.0, 1e-10).unwrap();
        assert!((plain.value - split.value).abs() < 1e-15);
        assert!(split.subdivisions <= plain.subdivisions);
    }

    #[test]
    fn kink_outside_range_is_noop() {
        let f = laplace(0.0, 1.0);
        let plain = integrate(&f, 0.5, 3.0, 1e-10).unwrap();
        let split = integrate_kinked(&f, 0.5, 3.0, -2.0, 1e-10).unwrap();
        assert_eq!(plain, split);
        let at_edge = integrate_kinked(&f, 0.5, 3.0, 0.5, 1e-10).unwrap();
        assert_eq!(plain, at_edge);
    }

    #[test]
    fn wide_laplace_window() {
        let (xhat, b) = (1.7, 0.4);
        let r = integrate_kinked(
            laplace(xhat, b),
            xhat - 20.0 * b,
            xhat + 20.0 * b,
            xhat,
            1e-10,
        )
        .unwrap();
        let tail = 0.5 * libm::exp(-20.0);
        assert!((r.value - (1.0 - 2.0 * tail)).abs() < 1e-10);
    }

    #[test]
    fn bitwise_deterministic() {
        let f = laplace(0.123, 0.77);
        let a = integrate_kinked(&f, -5.0, 4.0, 0.123, 1e-11).unwrap();
        let b = integrate_kinked(&f, -5.0, 4.0, 0.123, 1e-11).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(
            a.abs_error_estimate.to_bits(),
            b.abs_error_estimate.to_bits()
        );
        assert_eq!(a.subdivisions, b.subdivisions);
    }
}
