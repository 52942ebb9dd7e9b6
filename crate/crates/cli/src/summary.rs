use qgan_core::{GameTrace, Termination};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::table::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct TerminationCounts {
    pub equilibrium: usize,
    pub budget_exhausted: usize,
}

/// Statistics over a batch of games.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub schema_version: u32,
    pub games: usize,
    pub mean_c_step: f64,
    pub mean_fidelity: f64,
    pub cdf_c_step: Vec<(f64, f64)>,
    pub cdf_fidelity: Vec<(f64, f64)>,
    pub termination_counts: TerminationCounts,
    pub config_echo: ExperimentConfig,
}

/// Empirical CDF with one row per sample: sorted value, `(i+1)/N`.
pub fn empirical_cdf(values: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted.into_iter().enumerate().map(|(i, v)| (v, (i + 1) as f64 / n)).collect()
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

impl BatchSummary {
    /// `traces` must be non-empty.
    pub fn from_traces(config: &ExperimentConfig, traces: &[GameTrace]) -> Self {
        assert!(!traces.is_empty(), "summary of an empty batch");
        let steps: Vec<f64> = traces.iter().map(|t| t.c_step_total as f64).collect();
        let fidelities: Vec<f64> = traces.iter().map(|t| t.final_fidelity).collect();
        let mut counts = TerminationCounts::default();
        for t in traces {
            match t.termination {
                Termination::Equilibrium => counts.equilibrium += 1,
                Termination::BudgetExhausted => counts.budget_exhausted += 1,
            }
        }
        BatchSummary {
            schema_version: SCHEMA_VERSION,
            games: traces.len(),
            mean_c_step: mean(&steps),
            mean_fidelity: mean(&fidelities),
            cdf_c_step: empirical_cdf(&steps),
            cdf_fidelity: empirical_cdf(&fidelities),
            termination_counts: counts,
            config_echo: *config,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_is_sorted_and_ends_at_one() {
        let cdf = empirical_cdf(&[3.0, 1.0, 2.0, 2.0]);
        assert_eq!(cdf, vec![(1.0, 0.25), (2.0, 0.5), (2.0, 0.75), (3.0, 1.0)]);
        assert_eq!(empirical_cdf(&[7.0]), vec![(7.0, 1.0)]);
    }
}
