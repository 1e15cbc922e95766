use libm::{exp, lgamma, log, sqrt};

use super::Probability;
use crate::error::{Error, Result};

/// `exp(-m) m^n / n!` evaluated in log space; `m >= 0`.
pub(crate) fn pmf_raw(n: u64, mean: f64) -> f64 {
    if n == 0 {
        return exp(-mean);
    }
    if mean == 0.0 {
        return 0.0;
    }
    let k = n as f64;
    exp(k * log(mean) - mean - lgamma(k + 1.0))
}

// Sum of pmf(j) over j >= first, for first > mean so the terms decrease.
fn upper_sum(first: u64, mean: f64) -> f64 {
    let mut term = pmf_raw(first, mean);
    let mut sum = term;
    let mut j = first;
    while term > 1e-18 * sum {
        j += 1;
        term *= mean / j as f64;
        sum += term;
    }
    sum
}

fn lower_sum(last: u64, mean: f64) -> f64 {
    (0..=last).map(|j| pmf_raw(j, mean)).sum()
}

/// `P(X <= n)`; sums whichever side of the mean is the small tail.
pub(crate) fn cdf_raw(n: u64, mean: f64) -> f64 {
    if mean == 0.0 {
        return 1.0;
    }
    if mean == f64::INFINITY {
        return 0.0;
    }
    if (n as f64) < mean {
        lower_sum(n, mean).min(1.0)
    } else {
        (1.0 - upper_sum(n + 1, mean)).max(0.0)
    }
}

/// `P(X > n)`.
pub(crate) fn sf_raw(n: u64, mean: f64) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    if mean == f64::INFINITY {
        return 1.0;
    }
    if (n as f64) < mean {
        (1.0 - lower_sum(n, mean)).max(0.0)
    } else {
        upper_sum(n + 1, mean).min(1.0)
    }
}

fn check_mean(mean: f64, allow_zero: bool) -> Result<f64> {
    let ok = mean.is_finite() && (mean > 0.0 || (allow_zero && mean == 0.0));
    if ok {
        Ok(mean)
    } else {
        Err(Error::InvalidParameter {
            name: "mean",
            value: mean,
        })
    }
}

/// Poisson probability mass `P(X = n)` for `mean > 0`.
pub fn poisson_pmf(n: u64, mean: f64) -> Result<Probability> {
    let mean = check_mean(mean, false)?;
    Ok(Probability::saturating(pmf_raw(n, mean)))
}

/// `P(X <= n)`. A zero mean is allowed here (a point mass at 0), since interval
/// probabilities are evaluated at the boundary of the rate's support.
pub fn poisson_cdf(n: u64, mean: f64) -> Result<Probability> {
    let mean = check_mean(mean, true)?;
    Ok(Probability::saturating(cdf_raw(n, mean)))
}

/// Inversion of the discrete CDF: the smallest `n` with `P(X <= n) >= u`.
pub fn poisson_sample(mean: f64, u: Probability) -> Result<u64> {
    let mean = check_mean(mean, false)?;
    let u = u.open("uniform deviate")?;
    let cap = (mean + 40.0 * sqrt(mean) + 100.0) as u64;
    let mut cum = 0.0;
    let mut n = 0;
    loop {
        cum += pmf_raw(n, mean);
        if cum >= u || n >= cap {
            return Ok(n);
        }
        n += 1;
    }
}
