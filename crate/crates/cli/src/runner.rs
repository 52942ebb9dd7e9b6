use qgan_core::{run_game, GameTrace};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, SigmaSpec};
use crate::error::{CliError, CliResult};
use crate::table::SCHEMA_VERSION;

/// Contents of `result.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: u32,
    pub sigma_spec: SigmaSpec,
    pub trace: GameTrace,
}

impl ResultDocument {
    pub fn new(config: &ExperimentConfig, trace: GameTrace) -> Self {
        ResultDocument { schema_version: SCHEMA_VERSION, sigma_spec: config.sigma, trace }
    }
}

pub fn run_single(config: &ExperimentConfig) -> CliResult<GameTrace> {
    let sigma = config.true_state()?;
    Ok(run_game(&sigma, &config.game)?)
}

/// Game `k` runs with seed `seed + k` (wrapping); results are in game order.
pub fn run_batch(config: &ExperimentConfig, n: usize, jobs: usize) -> CliResult<Vec<GameTrace>> {
    if n == 0 {
        return Err(CliError::config("n: batch size must be at least 1"));
    }
    let game = |k: usize| run_single(&config.with_seed(config.game.seed.wrapping_add(k as u64)));
    if jobs <= 1 {
        return (0..n).map(game).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::config(format!("jobs: {e}")))?;
    pool.install(|| (0..n).into_par_iter().map(game).collect())
}
