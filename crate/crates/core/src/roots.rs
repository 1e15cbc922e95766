//! Scalar root finding for monotone increasing functions on a bracket.

const MAX_ITER: usize = 400;

/// Newton iteration safeguarded by bisection. `f` must be nondecreasing with
/// `f(lo) <= 0 <= f(hi)`; `df` is its derivative. Steps that leave the current
/// bracket, or a zero derivative, fall back to bisection.
pub(crate) fn newton_bracketed<F, D>(f: F, df: D, mut lo: f64, mut hi: f64, start: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = if start > lo && start < hi {
        start
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..MAX_ITER {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = df(x);
        let newton = x - fx / d;
        let next = if d > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == x || (hi - lo) <= 4.0 * f64::EPSILON * libm::fabs(x) {
            return next;
        }
        x = next;
    }
    x
}

/// Plain bisection for nondecreasing `f` with `f(lo) <= 0 <= f(hi)`; runs until
/// the midpoint no longer moves.
pub(crate) fn bisect<F>(f: F, mut lo: f64, mut hi: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    // Enough halvings to reach one ulp from any finite bracket.
    for _ in 0..2200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_finds_cube_root() {
        let r = newton_bracketed(|x| x * x * x - 2.0, |x| 3.0 * x * x, 0.0, 2.0, 1.0);
        assert!((r - libm::cbrt(2.0)).abs() < 1e-15);
    }

    #[test]
    fn newton_survives_flat_start() {
        // Derivative is zero at the start point.
        let r = newton_bracketed(|x| x * x * x - 1.0, |x| 3.0 * x * x, -3.0, 3.0, 0.0);
        assert!((r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bisection_resolves_to_ulp() {
        let r = bisect(|x| x - 0.3, 0.0, 1.0);
        assert!((r - 0.3).abs() <= 2.0 * f64::EPSILON);
    }
}
