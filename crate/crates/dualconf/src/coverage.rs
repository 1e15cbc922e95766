//! Coverage experiments fanned out over worker threads.
//!
//! Worker `k` of `w` runs blocks `k, k + w, k + 2w, ...`. Tallies are stored by block
//! index and combined by [`assemble`] in block order, so the report is bitwise
//! identical to the single-threaded [`dualconf_core::montecarlo::run_coverage`].

use std::thread;

use dualconf_core::montecarlo::{assemble, run_block, BlockTally, CoverageReport, ExperimentSpec};
use dualconf_core::Result;

pub fn run_coverage(spec: &ExperimentSpec) -> Result<CoverageReport> {
    spec.validate()?;
    let blocks = spec.blocks() as usize;
    let workers = spec.workers.clamp(1, blocks.max(1));
    if workers == 1 {
        return dualconf_core::montecarlo::run_coverage(spec);
    }

    let per_worker: Vec<Result<Vec<(usize, BlockTally)>>> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|k| {
                s.spawn(move || {
                    (k..blocks)
                        .step_by(workers)
                        .map(|b| run_block(spec, b as u64).map(|t| (b, t)))
                        .collect()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("coverage worker panicked"))
            .collect()
    });

    let mut slots: Vec<Option<BlockTally>> = vec![None; blocks];
    for part in per_worker {
        for (b, t) in part? {
            slots[b] = Some(t);
        }
    }
    let tallies: Vec<BlockTally> = slots
        .into_iter()
        .map(|t| t.expect("every block is assigned to a worker"))
        .collect();
    Ok(assemble(spec, &tallies))
}
