//! The alternating adversarial game.
//!
//! Each round the discriminator (D) runs gradient ascent on `d` over its
//! measurement angles until its last few estimates plateau, then the
//! generator (G) runs gradient descent on `d` over `(r, θ, φ)` until `d`
//! drops under the round's threshold. Gradients are forward differences of
//! two fresh shot-limited estimates. The game ends at equilibrium when D's
//! optimised `d` is within `d_bound` of zero, or when the step budget runs out.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bloch::{
    fidelity, generated_state, random_initial_params, DensityMatrix, GeneratorParams, MeasurementParams,
};
use crate::error::{check_finite, check_unit_interval, Error, Result};
use crate::noise::NoiseSettings;
use crate::shots::{estimate_d, EstimateSettings, OutcomeEstimate, SamplingMode, ShotCount};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Turn {
    #[serde(rename = "D")]
    Discriminator,
    #[serde(rename = "G")]
    Generator,
}

impl Turn {
    pub fn label(self) -> &'static str {
        match self {
            Turn::Discriminator => "D",
            Turn::Generator => "G",
        }
    }

    pub fn params(self) -> &'static [Param] {
        match self {
            Turn::Discriminator => &[Param::Beta, Param::Gamma],
            Turn::Generator => &[Param::R, Param::Theta, Param::Phi],
        }
    }
}

/// A single strategy parameter of either player.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    R,
    Theta,
    Phi,
    Beta,
    Gamma,
}

impl Param {
    pub const ALL: [Param; 5] = [Param::R, Param::Theta, Param::Phi, Param::Beta, Param::Gamma];

    pub fn owner(self) -> Turn {
        match self {
            Param::R | Param::Theta | Param::Phi => Turn::Generator,
            Param::Beta | Param::Gamma => Turn::Discriminator,
        }
    }
}

/// Both players' strategies at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlayerParams {
    pub generator: GeneratorParams,
    pub measurement: MeasurementParams,
}

impl PlayerParams {
    pub fn get(&self, param: Param) -> f64 {
        match param {
            Param::R => self.generator.r,
            Param::Theta => self.generator.theta,
            Param::Phi => self.generator.phi,
            Param::Beta => self.measurement.beta,
            Param::Gamma => self.measurement.gamma,
        }
    }

    pub fn with(mut self, param: Param, value: f64) -> Self {
        match param {
            Param::R => self.generator.r = value,
            Param::Theta => self.generator.theta = value,
            Param::Phi => self.generator.phi = value,
            Param::Beta => self.measurement.beta = value,
            Param::Gamma => self.measurement.gamma = value,
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.generator.validate()?;
        self.measurement.validate()
    }
}

/// G's per-round stopping threshold `max(start − slope·j, floor)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdSchedule {
    pub start: f64,
    pub slope: f64,
    pub floor: f64,
}

impl Default for ThresholdSchedule {
    fn default() -> Self {
        ThresholdSchedule { start: 0.055, slope: 0.01, floor: 0.02 }
    }
}

impl ThresholdSchedule {
    pub fn at(&self, round: u32) -> f64 {
        (self.start - self.slope * f64::from(round)).max(self.floor)
    }
}

/// What one unit of `c_step` stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepCounting {
    /// One step per gradient vector of the active player.
    #[default]
    PerGradient,
    /// One step per scalar partial derivative.
    PerPartial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GameConfig {
    /// Shots per state per estimate.
    pub shots: u64,
    /// Use exact probabilities instead of sampled frequencies.
    pub exact_mode: bool,
    pub fd_delta_angle: f64,
    pub fd_delta_r: f64,
    /// Gradient-ascent step for D's angles.
    pub learning_rate_d: f64,
    /// Gradient-descent step for G's angles.
    pub learning_rate_g: f64,
    /// Multiplier on G's step for `r`.
    pub r_rate_scale: f64,
    pub c_limit: u64,
    pub d_bound: f64,
    pub stall_window: usize,
    pub stall_tol: f64,
    pub g_thresholds: ThresholdSchedule,
    pub per_turn_cap: usize,
    pub step_counting: StepCounting,
    pub sampling: SamplingMode,
    pub noise: NoiseSettings,
    pub seed: u64,
    /// Opening strategies; drawn from the seed when absent.
    pub initial: Option<PlayerParams>,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            shots: 5000,
            exact_mode: false,
            fd_delta_angle: 0.1,
            fd_delta_r: 0.05,
            learning_rate_d: 2.0,
            learning_rate_g: 0.05,
            r_rate_scale: 0.25,
            c_limit: 500,
            d_bound: 0.02,
            stall_window: 3,
            stall_tol: 0.02,
            g_thresholds: ThresholdSchedule::default(),
            per_turn_cap: 50,
            step_counting: StepCounting::PerGradient,
            sampling: SamplingMode::Direct,
            noise: NoiseSettings::default(),
            seed: 0,
            initial: None,
        }
    }
}

fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidConfig { field, reason: reason.into() }
}

fn require_positive(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(field, format!("must be positive and finite, got {value}")))
    }
}

impl GameConfig {
    /// Defaults with exact probabilities in place of sampling.
    pub fn exact() -> Self {
        GameConfig { exact_mode: true, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.exact_mode && self.shots == 0 {
            return Err(invalid("shots", "must be at least 1"));
        }
        require_positive("fd_delta_angle", self.fd_delta_angle)?;
        require_positive("fd_delta_r", self.fd_delta_r)?;
        if self.fd_delta_r >= 1.0 {
            return Err(invalid("fd_delta_r", "must be below 1"));
        }
        require_positive("learning_rate_d", self.learning_rate_d)?;
        require_positive("learning_rate_g", self.learning_rate_g)?;
        require_positive("r_rate_scale", self.r_rate_scale)?;
        if self.c_limit == 0 {
            return Err(invalid("c_limit", "must be at least 1"));
        }
        if !(self.d_bound > 0.0 && self.d_bound < 1.0) {
            return Err(invalid("d_bound", format!("must lie in (0, 1), got {}", self.d_bound)));
        }
        if self.stall_window < 2 {
            return Err(invalid("stall_window", "must be at least 2"));
        }
        require_positive("stall_tol", self.stall_tol)?;
        let sched = &self.g_thresholds;
        require_positive("g_thresholds.start", sched.start)?;
        require_positive("g_thresholds.floor", sched.floor)?;
        if !(sched.slope.is_finite() && sched.slope >= 0.0) {
            return Err(invalid("g_thresholds.slope", "must be non-negative and finite"));
        }
        if self.per_turn_cap == 0 {
            return Err(invalid("per_turn_cap", "must be at least 1"));
        }
        self.noise.validate().map_err(|e| invalid("noise", e.to_string()))?;
        if let Some(initial) = &self.initial {
            let g = &initial.generator;
            let m = &initial.measurement;
            check_finite("r", g.r)
                .and_then(|_| check_unit_interval("r", g.r))
                .map_err(|e| invalid("initial.generator.r", e.to_string()))?;
            check_finite("theta", g.theta).map_err(|e| invalid("initial.generator.theta", e.to_string()))?;
            check_finite("phi", g.phi).map_err(|e| invalid("initial.generator.phi", e.to_string()))?;
            check_finite("beta", m.beta).map_err(|e| invalid("initial.measurement.beta", e.to_string()))?;
            check_finite("gamma", m.gamma).map_err(|e| invalid("initial.measurement.gamma", e.to_string()))?;
        }
        Ok(())
    }

    pub fn shot_count(&self) -> ShotCount {
        if self.exact_mode {
            ShotCount::Exact
        } else {
            ShotCount::Finite(self.shots)
        }
    }

    pub fn estimate_settings(&self) -> EstimateSettings {
        EstimateSettings { shots: self.shot_count(), noise: self.noise, sampling: self.sampling }
    }

    pub fn fd_delta(&self, param: Param) -> f64 {
        match param {
            Param::R => self.fd_delta_r,
            _ => self.fd_delta_angle,
        }
    }

    /// Signed update step: ascent for D, descent for G.
    pub fn step_rate(&self, param: Param) -> f64 {
        match param {
            Param::Beta | Param::Gamma => self.learning_rate_d,
            Param::R => -self.learning_rate_g * self.r_rate_scale,
            Param::Theta | Param::Phi => -self.learning_rate_g,
        }
    }

    /// `c_step` cost of one update for the given player.
    pub fn step_cost(&self, turn: Turn) -> u64 {
        match self.step_counting {
            StepCounting::PerGradient => 1,
            StepCounting::PerPartial => turn.params().len() as u64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// Cumulative `c_step` after this step.
    pub step_index: u64,
    pub round_index: u32,
    pub turn: Turn,
    pub params_after: PlayerParams,
    /// Post-update estimate of `d`.
    pub estimate: OutcomeEstimate,
    /// `F(σ, ρ)` for the noiseless generated state.
    pub fidelity_ideal: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Equilibrium,
    BudgetExhausted,
}

impl Termination {
    pub fn label(self) -> &'static str {
        match self {
            Termination::Equilibrium => "equilibrium",
            Termination::BudgetExhausted => "budget-exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameTrace {
    pub config: GameConfig,
    pub sigma: DensityMatrix,
    pub initial: PlayerParams,
    pub steps: Vec<StepRecord>,
    pub termination: Termination,
    pub c_step_total: u64,
    pub final_fidelity: f64,
}

impl GameTrace {
    /// Shots spent on both states: every step takes two estimates per
    /// partial plus one after the update, each estimate `2n` shots.
    pub fn total_shots(&self) -> Option<u64> {
        let n = self.config.shot_count().finite()?;
        let estimates: u64 = self.steps.iter().map(|s| 2 * s.turn.params().len() as u64 + 1).sum();
        Some(estimates * 2 * n)
    }

    pub fn final_params(&self) -> PlayerParams {
        self.steps.last().map_or(self.initial, |s| s.params_after)
    }

    /// Generator state at the end of each completed round, in round order.
    pub fn round_end_params(&self) -> Vec<(u32, PlayerParams)> {
        let mut out: Vec<(u32, PlayerParams)> = Vec::new();
        for step in &self.steps {
            match out.last_mut() {
                Some((round, params)) if *round == step.round_index => *params = step.params_after,
                _ => out.push((step.round_index, step.params_after)),
            }
        }
        out
    }
}

/// Mutable step counter shared by the turns of one game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepBudget {
    pub used: u64,
    pub limit: u64,
}

impl StepBudget {
    pub fn new(limit: u64) -> Self {
        StepBudget { used: 0, limit }
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.limit
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TurnOutcome {
    pub params: PlayerParams,
    pub records: Vec<StepRecord>,
    /// Last estimate of `d` seen by the turn (the entry value if no step ran).
    pub last_d: Option<f64>,
    /// The turn stopped because the game budget ran out.
    pub budget_hit: bool,
}

/// The random stream driving one game's sampling and opening strategies.
pub fn game_stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A stream independent of [`game_stream`] for synthesising the true state.
pub fn true_state_stream(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

fn estimate(params: &PlayerParams, sigma: &DensityMatrix, config: &GameConfig, rng: &mut ChaCha8Rng) -> Result<OutcomeEstimate> {
    estimate_d(&params.generator, &params.measurement, sigma, &config.estimate_settings(), rng)
}

/// Forward-difference `∂d/∂ξ` from two fresh estimates at `ξ` and `ξ+δ`.
///
/// For `r`, a forward offset past 1 is taken backward instead.
pub fn finite_diff_gradient(
    param: Param,
    params: &PlayerParams,
    sigma: &DensityMatrix,
    config: &GameConfig,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let delta = config.fd_delta(param);
    let at = params.get(param);
    let base = estimate(params, sigma, config, rng)?.d_hat;
    if param == Param::R && at + delta > 1.0 {
        let behind = estimate(&params.with(param, at - delta), sigma, config, rng)?.d_hat;
        Ok((base - behind) / delta)
    } else {
        let ahead = estimate(&params.with(param, at + delta), sigma, config, rng)?.d_hat;
        Ok((ahead - base) / delta)
    }
}

fn ideal_fidelity(sigma: &DensityMatrix, generator: &GeneratorParams) -> Result<f64> {
    fidelity(sigma, &generated_state(generator)?)
}

fn stalled(history: &[f64], window: usize, tol: f64) -> bool {
    if history.len() < window {
        return false;
    }
    let tail = &history[history.len() - window..];
    let max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = tail.iter().copied().fold(f64::INFINITY, f64::min);
    max - min < tol
}

/// Plays one player's turn.
///
/// D stops once its last `stall_window` estimates span less than
/// `stall_tol`; G stops once `d` is under the round's threshold, and does
/// nothing if `entry_d` already is. Either stops at `per_turn_cap` steps or
/// when `budget` runs out.
#[allow(clippy::too_many_arguments)]
pub fn run_turn(
    turn: Turn,
    round: u32,
    start: PlayerParams,
    entry_d: Option<f64>,
    sigma: &DensityMatrix,
    config: &GameConfig,
    budget: &mut StepBudget,
    rng: &mut ChaCha8Rng,
) -> Result<TurnOutcome> {
    let threshold = config.g_thresholds.at(round);
    let mut params = start;
    let mut records = Vec::new();
    let mut history: Vec<f64> = Vec::new();
    let mut last_d = entry_d;
    let mut budget_hit = false;

    loop {
        let done = match turn {
            Turn::Discriminator => stalled(&history, config.stall_window, config.stall_tol),
            Turn::Generator => last_d.is_some_and(|d| d < threshold),
        };
        if done || records.len() >= config.per_turn_cap {
            break;
        }
        if budget.exhausted() {
            budget_hit = true;
            break;
        }

        let mut gradient = [0.0; 3];
        for (slot, &param) in gradient.iter_mut().zip(turn.params()) {
            *slot = finite_diff_gradient(param, &params, sigma, config, rng)?;
        }
        for (&grad, &param) in gradient.iter().zip(turn.params()) {
            let mut value = params.get(param) + config.step_rate(param) * grad;
            if param == Param::R {
                value = value.clamp(0.0, 1.0);
            }
            params = params.with(param, value);
        }
        budget.used += config.step_cost(turn);

        let est = estimate(&params, sigma, config, rng)?;
        history.push(est.d_hat);
        last_d = Some(est.d_hat);
        records.push(StepRecord {
            step_index: budget.used,
            round_index: round,
            turn,
            params_after: params,
            estimate: est,
            fidelity_ideal: ideal_fidelity(sigma, &params.generator)?,
        });
    }

    Ok(TurnOutcome { params, records, last_d, budget_hit })
}

/// Plays a full game against the true state `sigma`.
pub fn run_game(sigma: &DensityMatrix, config: &GameConfig) -> Result<GameTrace> {
    config.validate()?;
    let mut rng = game_stream(config.seed);
    let initial = match config.initial {
        Some(params) => params,
        None => {
            let (generator, measurement) = random_initial_params(&mut rng);
            PlayerParams { generator, measurement }
        }
    };

    let mut budget = StepBudget::new(config.c_limit);
    let mut params = initial;
    let mut steps = Vec::new();
    let mut round = 0u32;

    let termination = loop {
        round += 1;
        let d_turn = run_turn(Turn::Discriminator, round, params, None, sigma, config, &mut budget, &mut rng)?;
        params = d_turn.params;
        steps.extend(d_turn.records);
        if d_turn.budget_hit {
            break Termination::BudgetExhausted;
        }
        // A strongly negative plateau is a stall at the wrong pole, not equilibrium.
        if d_turn.last_d.is_some_and(|d| d.abs() < config.d_bound) {
            break Termination::Equilibrium;
        }
        if budget.exhausted() {
            break Termination::BudgetExhausted;
        }

        let g_turn = run_turn(Turn::Generator, round, params, d_turn.last_d, sigma, config, &mut budget, &mut rng)?;
        params = g_turn.params;
        steps.extend(g_turn.records);
        if g_turn.budget_hit || budget.exhausted() {
            break Termination::BudgetExhausted;
        }
    };

    Ok(GameTrace {
        config: *config,
        sigma: *sigma,
        initial,
        steps,
        termination,
        c_step_total: budget.used,
        final_fidelity: ideal_fidelity(sigma, &params.generator)?,
    })
}

/// `(step_index, F)` for every recorded step.
pub fn fidelity_trajectory(trace: &GameTrace) -> Result<Vec<(u64, f64)>> {
    if trace.steps.is_empty() {
        return Err(Error::EmptyTrace);
    }
    Ok(trace.steps.iter().map(|s| (s.step_index, s.fidelity_ideal)).collect())
}
