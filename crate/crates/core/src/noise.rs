//! Single-qubit decoherence applied to states just before they are measured.
//!
//! The combined channel depolarizes first and then damps toward `|g⟩`.

use serde::{Deserialize, Serialize};

use crate::bloch::BlochVector;
use crate::error::{check_unit_interval, Result};

/// Which states pass through the channel before measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApplyTo {
    GeneratedOnly,
    #[default]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSettings {
    pub depolarizing_eps: f64,
    pub amplitude_damping_gamma: f64,
    pub apply_to: ApplyTo,
}

impl NoiseSettings {
    /// Mild decoherence that roughly reproduces the gap between noiseless
    /// and hardware statistics. Tuned by hand, not measured.
    pub const DECOHERENCE_PRESET: NoiseSettings = NoiseSettings {
        depolarizing_eps: 0.01,
        amplitude_damping_gamma: 0.01,
        apply_to: ApplyTo::Both,
    };

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        check_unit_interval("depolarizing_eps", self.depolarizing_eps)?;
        check_unit_interval("amplitude_damping_gamma", self.amplitude_damping_gamma)
    }

    pub fn is_identity(&self) -> bool {
        self.depolarizing_eps == 0.0 && self.amplitude_damping_gamma == 0.0
    }

    /// Channel output for `v`; depolarize, then amplitude-damp.
    pub fn channel(&self, v: BlochVector) -> Result<BlochVector> {
        if self.is_identity() {
            return Ok(v);
        }
        amplitude_damp(depolarize(v, self.depolarizing_eps)?, self.amplitude_damping_gamma)
    }

    pub fn on_generated(&self, v: BlochVector) -> Result<BlochVector> {
        self.channel(v)
    }

    pub fn on_true(&self, v: BlochVector) -> Result<BlochVector> {
        match self.apply_to {
            ApplyTo::Both => self.channel(v),
            ApplyTo::GeneratedOnly => Ok(v),
        }
    }
}

/// `(1−ε)ρ + ε·I/2`, a uniform contraction of the Bloch vector.
pub fn depolarize(v: BlochVector, eps: f64) -> Result<BlochVector> {
    check_unit_interval("depolarizing_eps", eps)?;
    Ok((1.0 - eps) * v)
}

/// Amplitude damping toward `|g⟩`, which is its fixed point.
pub fn amplitude_damp(v: BlochVector, gamma: f64) -> Result<BlochVector> {
    check_unit_interval("amplitude_damping_gamma", gamma)?;
    let shrink = (1.0 - gamma).sqrt();
    Ok(BlochVector::new(shrink * v.x, shrink * v.y, (1.0 - gamma) * v.z + gamma))
}
