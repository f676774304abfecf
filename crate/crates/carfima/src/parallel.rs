//! Thread-parallel drivers. Work items are keyed by index and reduced in
//! index order, so results do not depend on the thread count.

use carfima_core::estimate::{FitConfig, FitResult, StartOutcome, WhittleProblem};
use carfima_core::simulate::{ExactSimulator, SamplePath, StateEulerSimulator};
use carfima_core::Result;
use rayon::prelude::*;

/// [`carfima_core::estimate::fit`] with the starts run concurrently; returns
/// the same result.
pub fn fit(path: &SamplePath, p: usize, q: usize, cfg: &FitConfig) -> Result<FitResult> {
    let problem = WhittleProblem::new(path, p, q, cfg)?;
    let outcomes: Vec<StartOutcome> = problem.starting_points().par_iter().map(|t| problem.run_start(t)).collect();
    problem.select(&outcomes)
}

/// Replications `0..count` of one seed.
pub fn exact_paths(sim: &ExactSimulator, seed: u64, count: usize) -> Vec<SamplePath> {
    (0..count as u64).into_par_iter().map(|r| sim.sample(seed, r)).collect()
}

pub fn euler_paths(sim: &StateEulerSimulator, seed: u64, count: usize) -> Vec<SamplePath> {
    (0..count as u64).into_par_iter().map(|r| sim.sample(seed, r)).collect()
}
