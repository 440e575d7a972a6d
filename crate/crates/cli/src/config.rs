//! TOML experiment configs. Every table rejects unknown keys.

use std::fmt;
use std::path::Path;

use dualrlpn::decoder::DoubleRlpnParams;
use dualrlpn::duality::{ModelParams, XSelection};
use dualrlpn::lattice::LatticeScoreParams;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

/// A problem with the user's input. Maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

/// Reads and parses a config; parse errors carry the line and column.
pub fn load<T: DeserializeOwned + Versioned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
    let cfg: T = toml::from_str(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
    if cfg.format_version() != FORMAT_VERSION {
        return Err(config_error(format!(
            "{}: format_version {} is not supported (expected {FORMAT_VERSION})",
            path.display(),
            cfg.format_version()
        )));
    }
    Ok(cfg)
}

pub trait Versioned {
    fn format_version(&self) -> u32;
}

macro_rules! versioned {
    ($($t:ty),*) => {
        $(impl Versioned for $t {
            fn format_version(&self) -> u32 {
                self.format_version
            }
        })*
    };
}

versioned!(DecodeConfig, SurvivalConfig, LatticeConfig);

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecodeConfig {
    pub format_version: u32,
    pub n: usize,
    pub k: usize,
    /// Defaults to the Gilbert-Varshamov distance of `[n, k]`.
    #[serde(default)]
    pub t: Option<usize>,
    /// Seed of the planted instance; the decoder has its own in `params`.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub threads: Option<usize>,
    pub params: DoubleRlpnParams,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurvivalConfig {
    pub format_version: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub threads: Option<usize>,
    pub model: ModelParams,
    #[serde(default)]
    pub survival: SurvivalSection,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurvivalSection {
    /// Number of LPN samples kept; all of `H̃` when absent.
    #[serde(default)]
    pub sample_budget: Option<usize>,
    #[serde(default = "default_poisson_trials")]
    pub poisson_trials: u64,
    /// `"all"` or a number of wrong candidates to sample.
    #[serde(default)]
    pub candidates: Candidates,
    #[serde(default = "default_exponent")]
    pub region_exponent: f64,
    /// Defaults to the distinct non-negative wrong-candidate scores.
    #[serde(default)]
    pub thresholds: Option<Grid>,
}

impl Default for SurvivalSection {
    fn default() -> Self {
        SurvivalSection {
            sample_budget: None,
            poisson_trials: default_poisson_trials(),
            candidates: Candidates::default(),
            region_exponent: default_exponent(),
            thresholds: None,
        }
    }
}

fn default_poisson_trials() -> u64 {
    100_000
}

fn default_exponent() -> f64 {
    3.2
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Candidates {
    #[default]
    All,
    Keyword(String),
    Sample(usize),
}

impl Candidates {
    pub fn selection(&self) -> anyhow::Result<XSelection> {
        match self {
            Candidates::All => Ok(XSelection::All),
            Candidates::Keyword(k) if k == "all" => Ok(XSelection::All),
            Candidates::Keyword(k) => Err(config_error(format!("survival.candidates: expected \"all\" or a count, got {k:?}"))),
            Candidates::Sample(0) => Err(config_error("survival.candidates must be positive")),
            Candidates::Sample(m) => Ok(XSelection::Sample(*m)),
        }
    }
}

/// Either `values = [...]` or `min`, `max`, `step`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub min: Option<f64>,
    #[serde(default)]
    pub max: Option<f64>,
    #[serde(default)]
    pub step: Option<f64>,
}

impl Grid {
    pub fn points(&self, what: &str) -> anyhow::Result<Vec<f64>> {
        let pts = match (&self.values, self.min, self.max, self.step) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(lo), Some(hi), Some(step)) => range(lo, hi, step).map_err(|m| config_error(format!("{what}: {m}")))?,
            _ => return Err(config_error(format!("{what}: give either `values` or all of `min`, `max`, `step`"))),
        };
        if pts.is_empty() || pts.iter().any(|x| !x.is_finite()) || pts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(config_error(format!("{what}: values must be finite and strictly increasing")));
        }
        Ok(pts)
    }
}

/// `lo, lo + step, ...` up to `hi` inclusive. Points are `lo + i·step` rounded to 12 decimals,
/// so `0.1, 0.2, 0.3` come out as written.
pub fn range(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(lo.is_finite() && hi.is_finite() && step.is_finite()) || step <= 0.0 || hi < lo {
        return Err(format!("need min <= max and step > 0, got ({lo}, {hi}, {step})"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(format!("grid of {count} points is too large"));
    }
    Ok((0..count).map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12).collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub format_version: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub threads: Option<usize>,
    pub lattice: LatticeScoreParams,
    #[serde(default)]
    pub curve: CurveSection,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    #[serde(default = "default_mc_trials")]
    pub mc_trials: u64,
    /// Thresholds run from 0 to `max_sds` waterfall standard deviations.
    #[serde(default = "default_max_sds")]
    pub max_sds: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default)]
    pub fall_variance: Option<f64>,
    #[serde(default)]
    pub floor_index: u32,
}

impl Default for CurveSection {
    fn default() -> Self {
        CurveSection {
            mc_trials: default_mc_trials(),
            max_sds: default_max_sds(),
            points: default_points(),
            fall_variance: None,
            floor_index: 0,
        }
    }
}

fn default_mc_trials() -> u64 {
    100_000
}

fn default_max_sds() -> f64 {
    15.0
}

fn default_points() -> usize {
    61
}
