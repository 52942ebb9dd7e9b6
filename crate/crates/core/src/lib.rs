//! Numerical simulator of single-qubit quantum generative adversarial learning.
//!
//! A generator prepares a mixture of two antipodal pure states, a
//! discriminator measures along a chosen Bloch axis, and the two play an
//! alternating game on the shot-noise-limited difference of their click
//! probabilities until the generated state matches the true one.

pub mod bloch;
pub mod engine;
pub mod error;
pub mod noise;
#[cfg(any(test, feature = "test-oracles"))]
pub mod oracle;
pub mod shots;

pub use bloch::{
    fidelity, measurement_axis, optimal_axis, outcome_probability, random_initial_params, random_true_state,
    state_bloch, trace_distance, BlochVector, DensityMatrix, GeneratorParams, MeasurementParams, TrueStateMode,
};
pub use engine::{
    fidelity_trajectory, finite_diff_gradient, game_stream, run_game, run_turn, GameConfig, GameTrace, Param, PlayerParams,
    StepBudget, StepCounting, StepRecord, Termination, ThresholdSchedule, true_state_stream, Turn, TurnOutcome,
};
pub use error::{Error, Result};
pub use noise::{amplitude_damp, depolarize, ApplyTo, NoiseSettings};
pub use shots::{
    d_standard_deviation, estimate_d, sample_frequency, EstimateSettings, OutcomeEstimate, SamplingMode, ShotCount,
};
