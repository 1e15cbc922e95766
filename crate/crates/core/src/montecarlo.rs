//! Seeded coverage experiments.
//!
//! Trial `i` draws its uniform deviate as a pure function of `(seed, i)`:
//!
//! ```text
//! mix(z)   = splitmix64 finalizer
//!            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!            z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!            z ^ (z >> 31)
//! x        = mix(mix(seed) ^ (i * 0x9E3779B97F4A7C15 + round))      (wrapping u64)
//! u        = (x >> 11) * 2^-53
//! ```
//!
//! starting at `round = 0` and incrementing `round` while `u == 0`, so `u` is in
//! `(0, 1)`. One observation is drawn from `u` by inverse transform and one interval
//! is built from it. Trials are grouped into fixed blocks of [`BLOCK_TRIALS`]; each
//! block is tallied in trial order and blocks are combined in block order, so the
//! report does not depend on how blocks are spread over workers.

use alloc::vec::Vec;

use libm::{fabs, sqrt};

use crate::dists::{poisson_sample, LocScaleParams, LocationFamily, Probability};
use crate::duality::{solve_interval, ConfidenceDensity, Interval, IntervalKind};
use crate::error::{Error, Result};

pub const BLOCK_TRIALS: u64 = 4096;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The uniform deviate of trial `trial` under `seed`, strictly inside `(0, 1)`.
pub fn trial_uniform(seed: u64, trial: u64) -> f64 {
    let key = mix(seed);
    let mut round = 0u64;
    loop {
        let x = mix(key ^ trial.wrapping_mul(GOLDEN).wrapping_add(round));
        let u = (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        if u > 0.0 {
            return u;
        }
        round += 1;
    }
}

/// Ground truth the observations are drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrueModel {
    Location {
        family: LocationFamily,
        params: LocScaleParams,
    },
    Poisson {
        mean: f64,
    },
}

impl TrueModel {
    /// The parameter value the intervals should cover.
    pub fn true_value(&self) -> f64 {
        match self {
            TrueModel::Location { params, .. } => params.location(),
            TrueModel::Poisson { mean } => *mean,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentSpec {
    pub model: TrueModel,
    pub level: f64,
    pub kind: IntervalKind,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::Domain {
                name: "level",
                value: self.level,
            });
        }
        if self.trials == 0 {
            return Err(Error::Domain {
                name: "trials",
                value: 0.0,
            });
        }
        if self.workers == 0 {
            return Err(Error::Domain {
                name: "workers",
                value: 0.0,
            });
        }
        if let TrueModel::Poisson { mean } = self.model {
            if !(mean.is_finite() && mean > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "mean",
                    value: mean,
                });
            }
        }
        Ok(())
    }

    pub fn blocks(&self) -> u64 {
        self.trials.div_ceil(BLOCK_TRIALS)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageReport {
    pub trials: u64,
    pub hits: u64,
    pub coverage: f64,
    /// `sqrt(level (1 - level) / trials)`.
    pub binom_se: f64,
    /// Absent for one-sided kinds.
    pub mean_width: Option<f64>,
    pub min_width: Option<f64>,
    pub max_width: Option<f64>,
    pub seed: u64,
}

/// Tally of one block of trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockTally {
    pub hits: u64,
    /// Width total as a compensated pair: the sum is `width_sum + width_comp`.
    pub width_sum: f64,
    pub width_comp: f64,
    pub min_width: f64,
    pub max_width: f64,
}

impl BlockTally {
    fn empty() -> Self {
        Self {
            hits: 0,
            width_sum: 0.0,
            width_comp: 0.0,
            min_width: f64::INFINITY,
            max_width: f64::NEG_INFINITY,
        }
    }

    fn record(&mut self, iv: &Interval, truth: f64) {
        if iv.contains(truth) {
            self.hits += 1;
        }
        if let Some(w) = iv.width() {
            neumaier_add(&mut self.width_sum, &mut self.width_comp, w);
            self.min_width = self.min_width.min(w);
            self.max_width = self.max_width.max(w);
        }
    }
}

fn neumaier_add(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if fabs(*sum) >= fabs(x) {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

/// Runs the trials of block `block` in index order.
pub fn run_block(spec: &ExperimentSpec, block: u64) -> Result<BlockTally> {
    let start = block * BLOCK_TRIALS;
    let end = (start + BLOCK_TRIALS).min(spec.trials);
    let truth = spec.model.true_value();
    let mut tally = BlockTally::empty();
    match spec.model {
        TrueModel::Location { family, params } => {
            for i in start..end {
                let u = Probability::new(trial_uniform(spec.seed, i))?;
                let xhat = family.sample(&params, u)?;
                let cd = ConfidenceDensity::Location {
                    family,
                    center: xhat,
                    scale: params.scale(),
                };
                tally.record(&solve_interval(&cd, spec.level, spec.kind)?, truth);
            }
        }
        TrueModel::Poisson { mean } => {
            // The interval depends only on the count, so it is built once per count.
            let mut cache: Vec<Option<Interval>> = Vec::new();
            for i in start..end {
                let u = Probability::new(trial_uniform(spec.seed, i))?;
                let n = poisson_sample(mean, u)? as usize;
                if cache.len() <= n {
                    cache.resize(n + 1, None);
                }
                let iv = match cache[n] {
                    Some(iv) => iv,
                    None => {
                        let cd = ConfidenceDensity::PoissonRate { count: n as u64 };
                        let iv = solve_interval(&cd, spec.level, spec.kind)?;
                        cache[n] = Some(iv);
                        iv
                    }
                };
                tally.record(&iv, truth);
            }
        }
    }
    Ok(tally)
}

/// Combines block tallies, which must be given in block order.
pub fn assemble(spec: &ExperimentSpec, tallies: &[BlockTally]) -> CoverageReport {
    let mut hits = 0;
    let mut width_sum = 0.0;
    let mut width_comp = 0.0;
    let mut min_w = f64::INFINITY;
    let mut max_w = f64::NEG_INFINITY;
    for t in tallies {
        hits += t.hits;
        neumaier_add(&mut width_sum, &mut width_comp, t.width_sum);
        width_comp += t.width_comp;
        min_w = min_w.min(t.min_width);
        max_w = max_w.max(t.max_width);
    }
    let trials = spec.trials;
    let two_sided = spec.kind.is_two_sided();
    CoverageReport {
        trials,
        hits,
        coverage: hits as f64 / trials as f64,
        binom_se: sqrt(spec.level * (1.0 - spec.level) / trials as f64),
        mean_width: two_sided.then(|| (width_sum + width_comp) / trials as f64),
        min_width: two_sided.then_some(min_w),
        max_width: two_sided.then_some(max_w),
        seed: spec.seed,
    }
}

/// Runs every block on the calling thread. `spec.workers` does not change the
/// result; the std companion crate uses it to fan blocks out over threads.
pub fn run_coverage(spec: &ExperimentSpec) -> Result<CoverageReport> {
    spec.validate()?;
    let tallies = (0..spec.blocks())
        .map(|b| run_block(spec, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(spec, &tallies))
}

/// Coverage of Poisson-rate intervals; `spec.model` must be [`TrueModel::Poisson`].
pub fn run_coverage_poisson(spec: &ExperimentSpec) -> Result<CoverageReport> {
    match spec.model {
        TrueModel::Poisson { .. } => run_coverage(spec),
        TrueModel::Location { .. } => Err(Error::Evidence("expected a Poisson model")),
    }
}
