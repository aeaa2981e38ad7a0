//! Scenario files.
//!
//! ```toml
//! horizon_months = 600.0
//! sample_step = 1.0
//! threshold = 70.0
//!
//! [[contaminant]]
//! name = "dioxin"
//! theta = 0.006418        # or dv_months = 108.0
//! alpha = 0.5
//! initial_burden = 10.0
//!
//! [intake]
//! mode = "fixed"          # fixed | uniform | exponential
//! gap_months = 1.0
//! exposure = 0.5
//! seed = 1
//! ```
//!
//! `mode` selects the exposure law: `fixed` needs `exposure`, `uniform`
//! needs `exposure_min` and `exposure_max`, `exponential` needs
//! `exposure_mean`. Gaps are fixed at `gap_months` unless
//! `gap_distribution = "exponential"`, in which case `gap_months` is the
//! mean gap. Three `[[contaminant]]` tables select the coupled model, which
//! also reads the optional `[couplings]` table (`a` … `f`) and
//! `diagonal_kernel` (`half-order` or `contaminant-order`). Unknown keys
//! are rejected.

use std::path::{Path, PathBuf};

use kdem_core::process::{DiagonalKernel, ExposureModel, GapModel};
use kdem_core::{ContaminantSpec, Couplings, IntakeModel};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub horizon_months: f64,
    pub sample_step: f64,
    pub threshold: Option<f64>,
    #[serde(rename = "contaminant")]
    pub contaminants: Vec<ContaminantConfig>,
    pub intake: IntakeConfig,
    pub couplings: Option<CouplingsConfig>,
    pub diagonal_kernel: Option<KernelChoice>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContaminantConfig {
    pub name: String,
    pub dv_months: Option<f64>,
    pub theta: Option<f64>,
    pub alpha: f64,
    pub initial_burden: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExposureMode {
    Fixed,
    Uniform,
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapDistribution {
    #[default]
    Fixed,
    Exponential,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntakeConfig {
    pub mode: ExposureMode,
    pub gap_months: f64,
    #[serde(default)]
    pub gap_distribution: GapDistribution,
    pub exposure: Option<f64>,
    pub exposure_min: Option<f64>,
    pub exposure_max: Option<f64>,
    pub exposure_mean: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingsConfig {
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub b: f64,
    #[serde(default)]
    pub c: f64,
    #[serde(default)]
    pub d: f64,
    #[serde(default)]
    pub e: f64,
    #[serde(default)]
    pub f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelChoice {
    HalfOrder,
    ContaminantOrder,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => invalid(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ScenarioConfig =
            toml::from_str(text).map_err(|e| invalid(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        match self.contaminants.len() {
            1 => {
                if self.couplings.is_some() || self.diagonal_kernel.is_some() {
                    return Err(invalid(
                        "couplings and diagonal_kernel need three contaminants",
                    ));
                }
            }
            3 => {
                if self.intake.gap_distribution != GapDistribution::Fixed {
                    return Err(invalid("three contaminants need fixed gaps"));
                }
            }
            n => return Err(invalid(format!("expected 1 or 3 contaminants, found {n}"))),
        }
        for c in &self.contaminants {
            c.spec()?;
        }
        self.intake.model()?;
        Ok(())
    }

    pub fn specs(&self) -> Result<Vec<ContaminantSpec>, CliError> {
        self.contaminants
            .iter()
            .map(ContaminantConfig::spec)
            .collect()
    }

    pub fn couplings(&self) -> Couplings {
        let c = self.couplings.unwrap_or_default();
        Couplings {
            a: c.a,
            b: c.b,
            c: c.c,
            d: c.d,
            e: c.e,
            f: c.f,
        }
    }

    pub fn kernel(&self) -> DiagonalKernel {
        match self.diagonal_kernel {
            Some(KernelChoice::ContaminantOrder) => DiagonalKernel::ContaminantOrder,
            _ => DiagonalKernel::HalfOrder,
        }
    }
}

impl ContaminantConfig {
    pub fn spec(&self) -> Result<ContaminantSpec, CliError> {
        let spec = match (self.dv_months, self.theta) {
            (Some(dv), None) => {
                ContaminantSpec::from_half_life(&self.name, dv, self.alpha, self.initial_burden)
            }
            (None, Some(theta)) => {
                ContaminantSpec::from_theta(&self.name, theta, self.alpha, self.initial_burden)
            }
            _ => {
                return Err(invalid(format!(
                    "contaminant {}: give exactly one of dv_months and theta",
                    self.name
                )))
            }
        };
        spec.map_err(|e| invalid(format!("contaminant {}: {e}", self.name)))
    }
}

impl IntakeConfig {
    pub fn model(&self) -> Result<IntakeModel, CliError> {
        let require = |value: Option<f64>, key: &str| {
            value.ok_or_else(|| invalid(format!("intake mode {:?} needs {key}", self.mode)))
        };
        let exposure = match self.mode {
            ExposureMode::Fixed => ExposureModel::Constant(require(self.exposure, "exposure")?),
            ExposureMode::Uniform => ExposureModel::Uniform {
                low: require(self.exposure_min, "exposure_min")?,
                high: require(self.exposure_max, "exposure_max")?,
            },
            ExposureMode::Exponential => ExposureModel::Exponential {
                mean: require(self.exposure_mean, "exposure_mean")?,
            },
        };
        let stray: &[(&str, Option<f64>)] = match self.mode {
            ExposureMode::Fixed => &[
                ("exposure_min", self.exposure_min),
                ("exposure_max", self.exposure_max),
                ("exposure_mean", self.exposure_mean),
            ],
            ExposureMode::Uniform => &[
                ("exposure", self.exposure),
                ("exposure_mean", self.exposure_mean),
            ],
            ExposureMode::Exponential => &[
                ("exposure", self.exposure),
                ("exposure_min", self.exposure_min),
                ("exposure_max", self.exposure_max),
            ],
        };
        if let Some((key, _)) = stray.iter().find(|(_, v)| v.is_some()) {
            return Err(invalid(format!(
                "intake mode {:?} does not use {key}",
                self.mode
            )));
        }
        let gap = match self.gap_distribution {
            GapDistribution::Fixed => GapModel::Fixed(self.gap_months),
            GapDistribution::Exponential => GapModel::Exponential {
                mean: self.gap_months,
            },
        };
        IntakeModel::new(gap, exposure, self.seed).map_err(|e| invalid(format!("intake: {e}")))
    }
}
