//! Finite-shot estimates of the click probabilities on the generated and
//! true states, and of their difference `d = p_ρ − p_σ`.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::bloch::{
    measurement_axis, outcome_probability, rotated_ground, state_bloch, DensityMatrix, GeneratorParams,
    MeasurementParams,
};
use crate::error::{check_unit_interval, Error, Result};
use crate::noise::NoiseSettings;

/// Shots per state per estimate; `Exact` stands in for `n = ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShotCount {
    Exact,
    Finite(u64),
}

impl ShotCount {
    pub fn finite(self) -> Option<u64> {
        match self {
            ShotCount::Exact => None,
            ShotCount::Finite(n) => Some(n),
        }
    }
}

/// How shots on the generated state are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    /// One binomial draw at the ensemble's click probability.
    #[default]
    Direct,
    /// Draw the ensemble branch for every shot, then its outcome.
    Branchwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeEstimate {
    pub p_rho_hat: f64,
    pub p_sigma_hat: f64,
    pub d_hat: f64,
    pub shots: ShotCount,
}

impl OutcomeEstimate {
    fn new(p_rho_hat: f64, p_sigma_hat: f64, shots: ShotCount) -> Self {
        OutcomeEstimate { p_rho_hat, p_sigma_hat, d_hat: p_rho_hat - p_sigma_hat, shots }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateSettings {
    pub shots: ShotCount,
    pub noise: NoiseSettings,
    pub sampling: SamplingMode,
}

impl EstimateSettings {
    pub fn exact() -> Self {
        EstimateSettings { shots: ShotCount::Exact, noise: NoiseSettings::identity(), sampling: SamplingMode::Direct }
    }

    pub fn finite(n: u64) -> Self {
        EstimateSettings { shots: ShotCount::Finite(n), ..Self::exact() }
    }
}

fn sample_count<R: Rng + ?Sized>(p: f64, n: u64, rng: &mut R) -> Result<u64> {
    check_unit_interval("p", p)?;
    if n == 0 {
        return Err(Error::ZeroShots);
    }
    let binomial = Binomial::new(n, p).map_err(|_| Error::OutOfUnitInterval { name: "p", value: p })?;
    Ok(binomial.sample(rng))
}

/// Observed click frequency `k/n` with `k ~ Binomial(n, p)`.
pub fn sample_frequency<R: Rng + ?Sized>(p: f64, n: u64, rng: &mut R) -> Result<f64> {
    Ok(sample_count(p, n, rng)? as f64 / n as f64)
}

/// `√(p_ρ(1−p_ρ)/n + p_σ(1−p_σ)/n)`
pub fn d_standard_deviation(p_rho: f64, p_sigma: f64, n: u64) -> f64 {
    let n = n as f64;
    (p_rho * (1.0 - p_rho) / n + p_sigma * (1.0 - p_sigma) / n).sqrt()
}

/// Noise-free-of-sampling click probabilities `(p_ρ, p_σ)` after the channel.
pub fn exact_probabilities(
    gen: &GeneratorParams,
    meas: &MeasurementParams,
    sigma: &DensityMatrix,
    noise: &NoiseSettings,
) -> Result<(f64, f64)> {
    let m = measurement_axis(meas);
    let v_rho = noise.on_generated(state_bloch(gen)?)?;
    let v_sigma = noise.on_true(sigma.to_bloch())?;
    Ok((outcome_probability(&m, &v_rho)?, outcome_probability(&m, &v_sigma)?))
}

/// One estimate of `d`: `n` shots on each of ρ and σ, ρ first.
pub fn estimate_d<R: Rng + ?Sized>(
    gen: &GeneratorParams,
    meas: &MeasurementParams,
    sigma: &DensityMatrix,
    settings: &EstimateSettings,
    rng: &mut R,
) -> Result<OutcomeEstimate> {
    let (p_rho, p_sigma) = exact_probabilities(gen, meas, sigma, &settings.noise)?;
    let n = match settings.shots {
        ShotCount::Exact => return Ok(OutcomeEstimate::new(p_rho, p_sigma, ShotCount::Exact)),
        ShotCount::Finite(0) => return Err(Error::ZeroShots),
        ShotCount::Finite(n) => n,
    };
    let rho_clicks = match settings.sampling {
        SamplingMode::Direct => sample_count(p_rho, n, rng)?,
        SamplingMode::Branchwise => {
            let m = measurement_axis(meas);
            let branch = rotated_ground(gen.theta, gen.phi);
            let p_first = outcome_probability(&m, &settings.noise.on_generated(branch)?)?;
            let p_second = outcome_probability(&m, &settings.noise.on_generated(-branch)?)?;
            let first_shots = sample_count(gen.r, n, rng)?;
            let first = if first_shots > 0 { sample_count(p_first, first_shots, rng)? } else { 0 };
            let second = if first_shots < n { sample_count(p_second, n - first_shots, rng)? } else { 0 };
            first + second
        }
    };
    let sigma_clicks = sample_count(p_sigma, n, rng)?;
    let nf = n as f64;
    Ok(OutcomeEstimate::new(rho_clicks as f64 / nf, sigma_clicks as f64 / nf, settings.shots))
}
