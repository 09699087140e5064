//! Named experiment configurations and their key-value file format.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dictionary::{AtomKind, Spacing};
use crate::error::{invalid, Error, Result};
use crate::grid::{TransformKind, WeightKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetName {
    /// Pinned rational approximation of `x^{−α}` on `[1, 1e15]`.
    RationalPower,
    /// Pinned exponential-sum approximation of `exp(−x^α)` on `[0, 1e3]`.
    ExpsumStretched,
}

impl PresetName {
    pub fn id(self) -> &'static str {
        match self {
            PresetName::RationalPower => "rational_power",
            PresetName::ExpsumStretched => "expsum_stretched",
        }
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for PresetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational_power" => Ok(PresetName::RationalPower),
            "expsum_stretched" => Ok(PresetName::ExpsumStretched),
            other => Err(Error::UnknownPreset(other.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    PowerNeg,
    StretchedExp,
    /// Sum of dictionary atoms listed under `planted`.
    Planted,
}

/// One planted term: candidate index (0-based) and its coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedAtom {
    pub index: usize,
    pub u: f64,
}

/// Every input of one approximation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub target: TargetKind,
    pub alpha: f64,
    pub family: AtomKind,
    pub a: f64,
    pub b: f64,
    pub transform: TransformKind,
    pub weight: WeightKind,
    pub n: usize,
    pub l: usize,
    pub c: f64,
    pub d: f64,
    #[serde(default)]
    pub spacing: Spacing,
    pub m: usize,
    pub max_outer: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub planted: Vec<PlantedAtom>,
}

pub const DEFAULT_MAX_OUTER: usize = 500;

/// Full configuration of a named experiment.
pub fn preset(name: PresetName, alpha: f64, m: usize) -> Result<ExperimentConfig> {
    let cfg = match name {
        PresetName::RationalPower => ExperimentConfig {
            target: TargetKind::PowerNeg,
            alpha,
            family: AtomKind::RationalPinned,
            a: 1.0,
            b: 1e15,
            transform: TransformKind::Exp,
            weight: WeightKind::InverseX,
            n: 5000,
            l: 1000,
            c: 1e-15,
            d: 1e2,
            spacing: Spacing::Geometric,
            m,
            max_outer: DEFAULT_MAX_OUTER,
            planted: Vec::new(),
        },
        PresetName::ExpsumStretched => ExperimentConfig {
            target: TargetKind::StretchedExp,
            alpha,
            family: AtomKind::ExpPinned,
            a: 0.0,
            b: 1e3,
            transform: TransformKind::ExpMinusOne,
            weight: WeightKind::InverseOnePlusX,
            n: 5000,
            l: 1000,
            c: 1e-4,
            d: 1e4,
            spacing: Spacing::Geometric,
            m,
            max_outer: DEFAULT_MAX_OUTER,
            planted: Vec::new(),
        },
    };
    cfg.validate()?;
    Ok(cfg)
}

impl ExperimentConfig {
    /// Checks that all components fit together.
    pub fn validate(&self) -> Result<()> {
        match self.target {
            TargetKind::PowerNeg | TargetKind::StretchedExp => {
                if !(self.alpha > 0.0 && self.alpha < 1.0) {
                    return Err(invalid(format!("alpha must lie in (0, 1), got {}", self.alpha)));
                }
            }
            TargetKind::Planted => {
                if self.planted.is_empty() {
                    return Err(invalid("target `planted` needs at least one planted atom"));
                }
                if let Some(p) = self.planted.iter().find(|p| p.index >= self.l) {
                    return Err(invalid(format!(
                        "planted index {} out of range for l = {}",
                        p.index, self.l
                    )));
                }
            }
        }
        self.transform.validate_interval(self.a, self.b)?;
        if self.n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        if self.l < 2 {
            return Err(invalid("l must be at least 2"));
        }
        if !(self.c > 0.0 && self.c < self.d && self.d.is_finite()) {
            return Err(invalid(format!("candidate interval needs 0 < c < d, got [{}, {}]", self.c, self.d)));
        }
        if self.m == 0 {
            return Err(invalid("m must be at least 1"));
        }
        if self.max_outer == 0 {
            return Err(invalid("max_outer must be at least 1"));
        }
        let target_start = match self.target {
            TargetKind::PowerNeg => 1.0,
            TargetKind::StretchedExp => 0.0,
            TargetKind::Planted => self.family.domain_start(),
        };
        let atom_start: f64 = self.family.domain_start();
        if self.a < target_start || self.a < atom_start {
            return Err(invalid(format!(
                "a = {} lies outside the domain of the target (x ≥ {target_start}) or atoms (x ≥ {atom_start})",
                self.a
            )));
        }
        if let Some(pin) = self.family.pin_abscissa::<f64>() {
            if self.a != pin {
                return Err(invalid(format!(
                    "{:?} atoms vanish at x = {pin}, so the interval must start there (a = {})",
                    self.family, self.a
                )));
            }
        }
        if self.weight == WeightKind::InverseX && self.a <= 0.0 {
            return Err(invalid("weight 1/x requires a > 0"));
        }
        Ok(())
    }

    pub fn to_config_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_config_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_config_str(&text)
    }
}
