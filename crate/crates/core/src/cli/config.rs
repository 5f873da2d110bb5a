use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::protocols::{alpha_grid, Protocol, ResourceState};
use crate::tensor::DensityMatrix;

/// Environment variable overriding the resource guard.
pub const MAX_DIM_ENV: &str = "QSWITCH_MAX_DIM";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Verify,
    Run,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

/// Vacuum amplitudes used for the controlled choice in `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum AmplitudeMode {
    /// `α^{(l)}_i = <i|l>`, under which order and choice coincide.
    Coincident,
    /// Normalized Gaussian amplitudes from `seed`.
    RandomSeeded,
}

/// Encoding family for `run fixed-baseline`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EncodingFamily {
    DfsPhase,
    ClassicalFlag,
    Identical,
}

/// Fully resolved settings of one invocation. Also the schema of `--config`
/// files, where every key is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    pub protocol: Option<Protocol>,
    pub d: usize,
    pub receivers: usize,
    pub x: usize,
    pub resource: String,
    pub alpha: String,
    pub encodings: EncodingFamily,
    pub choice_amplitudes: AmplitudeMode,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub tol: f64,
    pub max_dim: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: CommandKind::Verify,
            protocol: None,
            d: 2,
            receivers: 1,
            x: 0,
            resource: "max".into(),
            alpha: "0:1:101".into(),
            encodings: EncodingFamily::DfsPhase,
            choice_amplitudes: AmplitudeMode::Coincident,
            seed: 0,
            out: None,
            format: None,
            tol: 1e-10,
            max_dim: 4096,
        }
    }
}

/// A partial [`RunConfig`]: the contents of a config file, or the flags
/// actually given on the command line.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub command: Option<CommandKind>,
    pub protocol: Option<Protocol>,
    pub d: Option<usize>,
    pub receivers: Option<usize>,
    pub x: Option<usize>,
    pub resource: Option<String>,
    pub alpha: Option<String>,
    pub encodings: Option<EncodingFamily>,
    pub choice_amplitudes: Option<AmplitudeMode>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub tol: Option<f64>,
    pub max_dim: Option<usize>,
}

impl ConfigLayer {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("bad config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    fn apply(self, cfg: &mut RunConfig) {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { cfg.$f = v; } )* };
        }
        set!(command, d, receivers, x, resource, alpha, encodings, choice_amplitudes, seed, tol, max_dim);
        if self.protocol.is_some() {
            cfg.protocol = self.protocol;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        if self.format.is_some() {
            cfg.format = self.format;
        }
    }
}

impl RunConfig {
    /// Defaults, then the config file, then `QSWITCH_MAX_DIM`, then flags.
    pub fn resolve(file: Option<ConfigLayer>, env_max_dim: Option<&str>, flags: ConfigLayer) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(f) = file {
            f.apply(&mut cfg);
        }
        if let Some(v) = env_max_dim {
            cfg.max_dim = v
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("{MAX_DIM_ENV} must be a positive integer, got `{v}`")))?;
        }
        flags.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.d < 2 {
            return Err(CliError::Config(format!("--d must be ≥ 2, got {}", self.d)));
        }
        if self.receivers == 0 {
            return Err(CliError::Config("--receivers must be ≥ 1".into()));
        }
        if self.x >= self.d {
            return Err(CliError::Config(format!("--x must be below d = {}, got {}", self.d, self.x)));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CliError::Config(format!("--tol must be positive, got {}", self.tol)));
        }
        if self.max_dim == 0 {
            return Err(CliError::Config("--max-dim must be positive".into()));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plain fields serialize")
    }

    /// Output format, defaulting to CSV for sweeps and JSON otherwise.
    pub fn format(&self) -> Format {
        self.format.unwrap_or(match self.command {
            CommandKind::Sweep => Format::Csv,
            _ => Format::Json,
        })
    }

    pub fn protocol(&self) -> Result<Protocol, CliError> {
        self.protocol
            .ok_or_else(|| CliError::Config("a protocol is required (private-dit, bipartite, ghz, fixed-baseline)".into()))
    }

    /// `max`, `schmidt:λ0,λ1,…` or `file:PATH` (a JSON resource or density matrix).
    pub fn resource_state(&self) -> Result<ResourceState, CliError> {
        let spec = self.resource.trim();
        let r = if spec == "max" {
            ResourceState::maximally_entangled(self.d)?
        } else if let Some(list) = spec.strip_prefix("schmidt:") {
            let spectrum = list
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Config(format!("bad Schmidt spectrum `{list}`: {e}")))?;
            ResourceState::schmidt(&spectrum)?
        } else if let Some(path) = spec.strip_prefix("file:") {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read resource {path}: {e}")))?;
            match serde_json::from_str::<ResourceState>(&text) {
                Ok(r) => r,
                Err(_) => {
                    let rho: DensityMatrix = serde_json::from_str(&text)
                        .map_err(|e| CliError::Config(format!("resource {path} is not a state: {e}")))?;
                    ResourceState::explicit(rho)?
                }
            }
        } else {
            return Err(CliError::Config(format!(
                "--resource must be max, schmidt:λ0,λ1,… or file:PATH, got `{spec}`"
            )));
        };
        if r.d != self.d {
            return Err(CliError::Config(format!(
                "resource has dimension {} but --d is {}",
                r.d, self.d
            )));
        }
        Ok(r)
    }

    /// Schmidt spectra from `alpha = START:END:POINTS`.
    pub fn grid(&self) -> Result<Vec<Vec<f64>>, CliError> {
        let parts: Vec<&str> = self.alpha.split(':').collect();
        let bad = || CliError::Config(format!("--alpha must be START:END:POINTS, got `{}`", self.alpha));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let end: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let points: usize = parts[2].trim().parse().map_err(|_| bad())?;
        alpha_grid(self.d, start, end, points).map_err(|e| CliError::Config(e.to_string()))
    }
}
