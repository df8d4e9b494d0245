//! Reliability case configs: the JSON documents consumed by the
//! `reliability` and `simulate` CLI subcommands.
//!
//! A config names one evaluation case, the channel or topology it runs on,
//! and where the eigenvalue product comes from — either a literal `pi` or a
//! plant file whose spectrum is analyzed on the fly.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::channel::{ChannelParams, LoopTopology};
use crate::error::{Error, Result};
use crate::montecarlo::{self, McConfig, McEstimate};
use crate::plant::{PlantModel, DEFAULT_UNSTABLE_TOL};
use crate::reliability::{self, ReliabilityResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    Noise,
    SingleInterference,
    FullInterference,
    FullInterferenceExact,
}

impl CaseKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseKind::Noise => "noise",
            CaseKind::SingleInterference => "single_interference",
            CaseKind::FullInterference => "full_interference",
            CaseKind::FullInterferenceExact => "full_interference_exact",
        }
    }

    pub fn needs_topology(&self) -> bool {
        !matches!(self, CaseKind::Noise)
    }
}

/// One reliability evaluation: which case, on what link(s), at which
/// eigenvalue product.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    pub case: CaseKind,
    #[serde(default)]
    pub channel: Option<ChannelParams>,
    #[serde(default)]
    pub topology: Option<LoopTopology>,
    /// Loop evaluated in interference cases.
    #[serde(default)]
    pub loop_index: usize,
    /// Literal unstable eigenvalue product; mutually exclusive with `plant`.
    #[serde(default)]
    pub pi: Option<f64>,
    /// Plant file whose spectrum supplies the product; resolved relative to
    /// the config file's directory.
    #[serde(default)]
    pub plant: Option<PathBuf>,
    /// Unstable-classification slack for `plant` analysis.
    #[serde(default)]
    pub tol: Option<f64>,
    /// Sampling defaults for `simulate`; flags override.
    #[serde(default)]
    pub mc: Option<McConfig>,
}

impl CaseConfig {
    pub fn from_json_str(text: &str, origin: &Path) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let config: CaseConfig =
            serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Config {
                path: origin.to_path_buf(),
                at: e.path().to_string(),
                detail: e.inner().to_string(),
            })?;
        config.validate(origin)?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text, path)
    }

    fn validate(&self, origin: &Path) -> Result<()> {
        let config_err = |detail: String| Error::Config {
            path: origin.to_path_buf(),
            at: ".".to_string(),
            detail,
        };
        match (self.pi, &self.plant) {
            (None, None) => {
                return Err(config_err("one of 'pi' or 'plant' is required".to_string()))
            }
            (Some(_), Some(_)) => {
                return Err(config_err("'pi' and 'plant' are mutually exclusive".to_string()))
            }
            _ => {}
        }
        if self.case.needs_topology() {
            let topology = self
                .topology
                .as_ref()
                .ok_or_else(|| config_err(format!("case '{}' requires 'topology'", self.case.as_str())))?;
            topology.validate()?;
            if self.loop_index >= topology.loop_count() {
                return Err(config_err(format!(
                    "loop_index {} out of range for K = {}",
                    self.loop_index,
                    topology.loop_count()
                )));
            }
        } else {
            let channel = self
                .channel
                .as_ref()
                .ok_or_else(|| config_err("case 'noise' requires 'channel'".to_string()))?;
            channel.validate()?;
        }
        Ok(())
    }

    /// The eigenvalue product: literal, or analyzed from the plant file
    /// (resolved relative to `base_dir`).
    pub fn resolve_pi(&self, base_dir: Option<&Path>) -> Result<f64> {
        if let Some(pi) = self.pi {
            return Ok(pi);
        }
        let relative = self.plant.as_ref().expect("validated: pi xor plant");
        let path = match base_dir {
            Some(dir) if relative.is_relative() => dir.join(relative),
            _ => relative.clone(),
        };
        let plant = PlantModel::from_json_file(&path)?;
        let analysis = plant.eigen_analyze(self.tol.unwrap_or(DEFAULT_UNSTABLE_TOL))?;
        Ok(analysis.unstable_product)
    }

    /// Evaluate the case's closed form at product `pi`.
    pub fn closed_form(&self, pi: f64) -> Result<ReliabilityResult> {
        match self.case {
            CaseKind::Noise => {
                reliability::alpha_noise(self.channel.as_ref().expect("validated"), pi)
            }
            CaseKind::SingleInterference => reliability::alpha_single_interference(
                self.topology.as_ref().expect("validated"),
                self.loop_index,
                pi,
            ),
            CaseKind::FullInterference => reliability::alpha_full_interference(
                self.topology.as_ref().expect("validated"),
                self.loop_index,
                pi,
            ),
            CaseKind::FullInterferenceExact => reliability::alpha_full_interference_exact(
                self.topology.as_ref().expect("validated"),
                self.loop_index,
                pi,
            ),
        }
    }

    /// Monte Carlo estimate of the same quantity.
    pub fn monte_carlo(&self, pi: f64, mc: &McConfig) -> Result<McEstimate> {
        match self.case {
            CaseKind::Noise => montecarlo::estimate_beta_noise(
                self.channel.as_ref().expect("validated"),
                pi,
                mc,
            ),
            _ => montecarlo::estimate_alpha_interference(
                self.topology.as_ref().expect("validated"),
                self.loop_index,
                pi,
                mc,
            ),
        }
    }
}
