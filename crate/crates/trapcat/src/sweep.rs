//! Parallel execution of independent runs.

use rayon::prelude::*;
use trapcat_core::protocol::{run_protocol, Sampling};
use trapcat_core::{ProtocolConfig, Result, SimulationReport};

/// Seed for row `index` of a sweep started at `seed`.
pub fn row_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add(index as u64)
}

/// Applies the seed schedule to a list of configurations.
pub fn schedule(mut configs: Vec<ProtocolConfig>) -> Vec<ProtocolConfig> {
    for (i, cfg) in configs.iter_mut().enumerate() {
        if let Sampling::Seeded(seed) = cfg.sampling {
            cfg.sampling = Sampling::Seeded(row_seed(seed, i));
        }
    }
    configs
}

/// Runs every configuration. Results come back in input order; on failure
/// the error of the earliest failing row is returned.
pub fn run_all(configs: &[ProtocolConfig]) -> Result<Vec<SimulationReport>> {
    let results: Vec<Result<SimulationReport>> = configs.par_iter().map(run_protocol).collect();
    results.into_iter().collect()
}
