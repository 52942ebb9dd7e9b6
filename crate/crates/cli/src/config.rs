//! Experiment configuration: one JSON object holding every game setting
//! plus the true-state specification under `sigma`.

use std::path::Path;

use qgan_core::{random_true_state, true_state_stream, BlochVector, DensityMatrix, GameConfig, TrueStateMode};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub const SEED_ENV: &str = "QGAN_SIM_SEED";

/// Step budget when the config leaves `c_limit` out.
pub const DEFAULT_C_LIMIT_PURE: u64 = 500;
pub const DEFAULT_C_LIMIT_MIXED: u64 = 300;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaSpec {
    #[default]
    PureGround,
    BlochBall,
    HilbertSchmidt,
    Fixed([f64; 3]),
}

impl SigmaSpec {
    pub fn default_c_limit(&self) -> u64 {
        match self {
            SigmaSpec::PureGround => DEFAULT_C_LIMIT_PURE,
            _ => DEFAULT_C_LIMIT_MIXED,
        }
    }

    /// Random specs draw from the true-state stream of `seed`.
    pub fn resolve(&self, seed: u64) -> CliResult<DensityMatrix> {
        let mode = match *self {
            SigmaSpec::PureGround => TrueStateMode::PureGround,
            SigmaSpec::BlochBall => TrueStateMode::BlochBall,
            SigmaSpec::HilbertSchmidt => TrueStateMode::HilbertSchmidt,
            SigmaSpec::Fixed([x, y, z]) => TrueStateMode::Fixed(BlochVector::new(x, y, z)),
        };
        random_true_state(&mode, &mut true_state_stream(seed))
            .map_err(|e| CliError::config(format!("sigma: {e}")))
    }
}

/// Fully resolved experiment. Serializes flat: `sigma` beside the game fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Map<String, Value>")]
pub struct ExperimentConfig {
    pub sigma: SigmaSpec,
    #[serde(flatten)]
    pub game: GameConfig,
}

impl TryFrom<Map<String, Value>> for ExperimentConfig {
    type Error = CliError;

    fn try_from(mut fields: Map<String, Value>) -> CliResult<Self> {
        let sigma = match fields.remove("sigma") {
            Some(value) => serde_json::from_value(value).map_err(|e| CliError::config(format!("sigma: {e}")))?,
            None => SigmaSpec::default(),
        };
        fields.entry("c_limit").or_insert_with(|| Value::from(sigma.default_c_limit()));
        let game: GameConfig = serde_path_to_error::deserialize(Value::Object(fields)).map_err(|e| {
            let path = e.path().to_string();
            if path == "." {
                CliError::config(e.into_inner().to_string())
            } else {
                CliError::config(format!("{path}: {}", e.into_inner()))
            }
        })?;
        game.validate()?;
        if let SigmaSpec::Fixed(_) = sigma {
            sigma.resolve(game.seed)?;
        }
        Ok(ExperimentConfig { sigma, game })
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| CliError::config(format!("malformed JSON: {e}")))?;
        match value {
            Value::Object(fields) => Self::try_from(fields),
            _ => Err(CliError::config("top level must be a JSON object")),
        }
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    /// Seed precedence: explicit flag, then the environment, then the file.
    pub fn apply_seed_override(&mut self, flag: Option<u64>, env: Option<&str>) -> CliResult<()> {
        if let Some(seed) = flag {
            self.game.seed = seed;
        } else if let Some(text) = env {
            self.game.seed = text
                .trim()
                .parse()
                .map_err(|e| CliError::config(format!("{SEED_ENV}: cannot parse {text:?} as a seed: {e}")))?;
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        ExperimentConfig { game: GameConfig { seed, ..self.game }, ..*self }
    }

    pub fn true_state(&self) -> CliResult<DensityMatrix> {
        self.sigma.resolve(self.game.seed)
    }
}
