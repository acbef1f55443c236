//! Run configuration with layered precedence: command-line flags
//! override the seed environment variable, which overrides the config
//! file's per-command section, then its top level, then built-in
//! defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thermoswitch::infomeasures::InputParameter;
use thermoswitch::thermal::{Temperature, ThermalizationStrength};

use crate::{CliError, Format};

pub const SEED_ENV: &str = "THERMOSWITCH_SEED";
pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_SHOTS: u64 = 10_000;
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_SWEEP_GRID: usize = 101;
pub const DEFAULT_VALIDATE_GRID: usize = 11;

#[derive(Debug, Default, Clone, Deserialize)]
pub struct Section {
    pub temperature: Option<String>,
    pub p: Option<f64>,
    pub s: Option<f64>,
    pub grid: Option<usize>,
    pub shots: Option<u64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
struct FileConfig {
    #[serde(flatten)]
    base: Section,
    #[serde(default)]
    sweep: Option<Section>,
    #[serde(default)]
    capacity: Option<Section>,
    #[serde(default, rename = "turning-point")]
    turning_point: Option<Section>,
    #[serde(default)]
    nonmarkov: Option<Section>,
    #[serde(default)]
    emulate: Option<Section>,
    #[serde(default)]
    validate: Option<Section>,
}

/// Resolves option values through the precedence chain for one
/// command.
pub struct Merger {
    section: Section,
    base: Section,
    env_seed: Option<u64>,
}

impl Merger {
    pub fn load(path: Option<&Path>, command: &str) -> Result<Self, CliError> {
        let file: FileConfig = match path {
            None => FileConfig::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", p.display())))?;
                toml::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("bad config {}: {e}", p.display())))?
            }
        };
        let section = match command {
            "sweep" => file.sweep,
            "capacity" => file.capacity,
            "turning-point" => file.turning_point,
            "nonmarkov" => file.nonmarkov,
            "emulate" => file.emulate,
            "validate" => file.validate,
            _ => None,
        }
        .unwrap_or_default();

        let env_seed = match std::env::var(SEED_ENV) {
            Err(_) => None,
            Ok(v) => Some(v.parse::<u64>().map_err(|_| {
                CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))
            })?),
        };

        Ok(Self {
            section,
            base: file.base,
            env_seed,
        })
    }

    fn pick<V: Clone>(&self, flag: Option<V>, get: impl Fn(&Section) -> Option<V>) -> Option<V> {
        flag.or_else(|| get(&self.section)).or_else(|| get(&self.base))
    }

    pub fn temperature(&self, flag: Option<&str>) -> Result<Temperature<f64>, CliError> {
        let spec = self
            .pick(flag.map(str::to_string), |s| s.temperature.clone())
            .unwrap_or_else(|| "zero".to_string());
        parse_temperature(&spec)
    }

    pub fn p(&self, flag: Option<f64>) -> Result<InputParameter<f64>, CliError> {
        let v = self.pick(flag, |s| s.p).unwrap_or(0.5);
        InputParameter::new(v).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn s(&self, flag: Option<f64>) -> Result<ThermalizationStrength<f64>, CliError> {
        let v = self.pick(flag, |s| s.s).unwrap_or(0.5);
        ThermalizationStrength::new(v).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn grid(&self, flag: Option<usize>, default: usize) -> Result<usize, CliError> {
        let v = self.pick(flag, |s| s.grid).unwrap_or(default);
        if v < 2 {
            return Err(CliError::Usage(format!("grid needs at least 2 points, got {v}")));
        }
        Ok(v)
    }

    pub fn shots(&self, flag: Option<u64>) -> Result<u64, CliError> {
        let v = self.pick(flag, |s| s.shots).unwrap_or(DEFAULT_SHOTS);
        if v == 0 {
            return Err(CliError::Usage("shots must be positive".into()));
        }
        Ok(v)
    }

    pub fn trials(&self, flag: Option<usize>) -> Result<usize, CliError> {
        let v = self.pick(flag, |s| s.trials).unwrap_or(DEFAULT_TRIALS);
        if v < 2 {
            return Err(CliError::Usage("need at least 2 trials".into()));
        }
        Ok(v)
    }

    /// Seed precedence: flag, then environment, then config, then
    /// the built-in default.
    pub fn seed(&self, flag: Option<u64>) -> u64 {
        flag.or(self.env_seed)
            .or(self.section.seed)
            .or(self.base.seed)
            .unwrap_or(DEFAULT_SEED)
    }

    pub fn output(&self, flag: Option<PathBuf>, default: &str) -> PathBuf {
        self.pick(flag, |s| s.output.clone())
            .unwrap_or_else(|| PathBuf::from(default))
    }

    pub fn format(&self, flag: Option<Format>) -> Result<Format, CliError> {
        if let Some(f) = flag {
            return Ok(f);
        }
        match self.pick(None, |s| s.format.clone()) {
            None => Ok(Format::Csv),
            Some(text) => match text.as_str() {
                "csv" => Ok(Format::Csv),
                "json" => Ok(Format::Json),
                other => Err(CliError::Usage(format!("unknown format `{other}`"))),
            },
        }
    }
}

pub fn parse_temperature(spec: &str) -> Result<Temperature<f64>, CliError> {
    match spec {
        "zero" => Ok(Temperature::Zero),
        "inf" | "infinite" => Ok(Temperature::Infinite),
        other => {
            let kt: f64 = other.parse().map_err(|_| {
                CliError::Usage(format!(
                    "temperature must be `zero`, `inf`, or a positive kT, got `{other}`"
                ))
            })?;
            Temperature::finite(kt).map_err(|e| CliError::Usage(e.to_string()))
        }
    }
}
