//! Flat `key = value` run configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Later assignments win,
//! so command-line overrides are applied after the file.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nuclab_core::kessence::{DecayVariant, KEssenceModel};
use nuclab_core::potential::{Interval, PotentialSpec};
use nuclab_core::slowroll::DEFAULT_PASS_THRESHOLD;
use nuclab_core::tunneling::{CoshGrouping, TunnelingParams};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("bad value `{value}` for `{key}`: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    Text,
    Jsonl,
    #[default]
    Both,
}

impl ReportFormat {
    pub fn text(self) -> bool {
        matches!(self, Self::Text | Self::Both)
    }

    pub fn jsonl(self) -> bool {
        matches!(self, Self::Jsonl | Self::Both)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub potential: PotentialSpec,
    pub range: Interval,
    pub grid_n: usize,
    pub curve_samples: usize,
    pub use_v1_only: bool,
    pub pass_threshold: f64,
    pub tunneling: TunnelingParams,
    pub kessence: KEssenceModel,
    pub eps0: f64,
    pub t_end: f64,
    pub steps: usize,
    pub variant: DecayVariant,
    pub out_dir: Option<PathBuf>,
    pub report_format: ReportFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            potential: PotentialSpec::default(),
            range: Interval::default(),
            grid_n: 4096,
            curve_samples: 1001,
            use_v1_only: true,
            pass_threshold: DEFAULT_PASS_THRESHOLD,
            tunneling: TunnelingParams::default(),
            kessence: KEssenceModel::default(),
            eps0: 1e-3,
            t_end: 1.0,
            steps: 1024,
            variant: DecayVariant::Exact,
            out_dir: None,
            report_format: ReportFormat::Both,
        }
    }
}

/// Every recognized key, in the order `dump` writes them.
pub const KEYS: &[&str] = &[
    "amplitude",
    "m",
    "phi_star",
    "offset",
    "range_min",
    "range_max",
    "grid_n",
    "curve_samples",
    "use_v1_only",
    "pass_threshold",
    "epsilon_plus",
    "upper_limit",
    "prefactor_a",
    "particle_mass",
    "e_field",
    "s_b",
    "cosh_grouping",
    "f0",
    "f2",
    "x0",
    "v0",
    "eps0",
    "t_end",
    "steps",
    "variant",
    "out_dir",
    "report_format",
];

fn bad(key: &str, value: &str, reason: impl ToString) -> ConfigError {
    ConfigError::BadValue {
        key: key.to_owned(),
        value: value.to_owned(),
        reason: reason.to_string(),
    }
}

fn float(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = value.parse().map_err(|e| bad(key, value, e))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(key, value, "must be finite"))
    }
}

fn count(key: &str, value: &str) -> Result<usize, ConfigError> {
    value.parse().map_err(|e| bad(key, value, e))
}

fn flag(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(bad(key, value, "expected true or false")),
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        cfg.merge_file(path)?;
        Ok(cfg)
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        self.merge_str(&text)
    }

    pub fn merge_str(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line: i + 1,
                    text: line.to_owned(),
                });
            };
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "amplitude" => self.potential.amplitude = float(key, value)?,
            "m" => self.potential.m = float(key, value)?,
            "phi_star" => self.potential.phi_star = float(key, value)?,
            "offset" => self.potential.offset = float(key, value)?,
            "range_min" => self.range.lo = float(key, value)?,
            "range_max" => self.range.hi = float(key, value)?,
            "grid_n" => self.grid_n = count(key, value)?,
            "curve_samples" => self.curve_samples = count(key, value)?,
            "use_v1_only" => self.use_v1_only = flag(key, value)?,
            "pass_threshold" => self.pass_threshold = float(key, value)?,
            "epsilon_plus" => self.tunneling.epsilon_plus = float(key, value)?,
            "upper_limit" => self.tunneling.upper_limit = float(key, value)?,
            "prefactor_a" => self.tunneling.prefactor_a = float(key, value)?,
            "particle_mass" => self.tunneling.mass = float(key, value)?,
            "e_field" => self.tunneling.e_field = float(key, value)?,
            "s_b" => {
                self.tunneling.s_b_override = match value {
                    "" | "auto" => None,
                    v => Some(float(key, v)?),
                }
            }
            "cosh_grouping" => {
                self.tunneling.cosh_grouping = match value {
                    "literal" => CoshGrouping::Literal,
                    "paired" => CoshGrouping::Paired,
                    _ => return Err(bad(key, value, "expected literal or paired")),
                }
            }
            "f0" => self.kessence.f0 = float(key, value)?,
            "f2" => self.kessence.f2 = float(key, value)?,
            "x0" => self.kessence.x0 = float(key, value)?,
            "v0" => self.kessence.v0 = float(key, value)?,
            "eps0" => self.eps0 = float(key, value)?,
            "t_end" => self.t_end = float(key, value)?,
            "steps" => self.steps = count(key, value)?,
            "variant" => self.variant = value.parse().map_err(|e: String| bad(key, value, e))?,
            "out_dir" => self.out_dir = Some(PathBuf::from(value)),
            "report_format" => {
                self.report_format = match value {
                    "text" => ReportFormat::Text,
                    "jsonl" => ReportFormat::Jsonl,
                    "both" => ReportFormat::Both,
                    _ => return Err(bad(key, value, "expected text, jsonl or both")),
                }
            }
            _ => return Err(ConfigError::UnknownKey(key.to_owned())),
        }
        Ok(())
    }

    /// Rejects parameter sets no pipeline stage can run with.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |msg: String| Err(ConfigError::Invalid(msg));
        self.potential
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.kessence
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if !(self.range.lo < self.range.hi) {
            return invalid(format!("range_min {} must be below range_max {}", self.range.lo, self.range.hi));
        }
        if self.grid_n < 16 {
            return invalid(format!("grid_n must be at least 16, got {}", self.grid_n));
        }
        if self.curve_samples < 1000 {
            return invalid(format!("curve_samples must be at least 1000, got {}", self.curve_samples));
        }
        if !(self.pass_threshold > 0.0) {
            return invalid(format!("pass_threshold must be positive, got {}", self.pass_threshold));
        }
        let t = &self.tunneling;
        if !(t.upper_limit > 0.0) {
            return invalid(format!("upper_limit must be positive, got {}", t.upper_limit));
        }
        if !(t.prefactor_a > 0.0) {
            return invalid(format!("prefactor_a must be positive, got {}", t.prefactor_a));
        }
        if !(t.mass > 0.0 && t.mass <= 1.0) {
            return invalid(format!("particle_mass must lie in (0, 1], got {}", t.mass));
        }
        if !(self.t_end > 0.0) {
            return invalid(format!("t_end must be positive, got {}", self.t_end));
        }
        if self.steps < 16 {
            return invalid(format!("steps must be at least 16, got {}", self.steps));
        }
        Ok(())
    }

    /// Renders the effective configuration in the same flat format it is read from.
    pub fn dump(&self) -> String {
        let t = &self.tunneling;
        let mut out = String::new();
        for key in KEYS {
            let value = match *key {
                "amplitude" => self.potential.amplitude.to_string(),
                "m" => self.potential.m.to_string(),
                "phi_star" => self.potential.phi_star.to_string(),
                "offset" => self.potential.offset.to_string(),
                "range_min" => self.range.lo.to_string(),
                "range_max" => self.range.hi.to_string(),
                "grid_n" => self.grid_n.to_string(),
                "curve_samples" => self.curve_samples.to_string(),
                "use_v1_only" => self.use_v1_only.to_string(),
                "pass_threshold" => self.pass_threshold.to_string(),
                "epsilon_plus" => t.epsilon_plus.to_string(),
                "upper_limit" => t.upper_limit.to_string(),
                "prefactor_a" => t.prefactor_a.to_string(),
                "particle_mass" => t.mass.to_string(),
                "e_field" => t.e_field.to_string(),
                "s_b" => t.s_b_override.map_or_else(|| "auto".to_owned(), |v| v.to_string()),
                "cosh_grouping" => match t.cosh_grouping {
                    CoshGrouping::Literal => "literal".to_owned(),
                    CoshGrouping::Paired => "paired".to_owned(),
                },
                "f0" => self.kessence.f0.to_string(),
                "f2" => self.kessence.f2.to_string(),
                "x0" => self.kessence.x0.to_string(),
                "v0" => self.kessence.v0.to_string(),
                "eps0" => self.eps0.to_string(),
                "t_end" => self.t_end.to_string(),
                "steps" => self.steps.to_string(),
                "variant" => self.variant.to_string(),
                "out_dir" => match &self.out_dir {
                    Some(p) => p.display().to_string(),
                    None => continue,
                },
                "report_format" => match self.report_format {
                    ReportFormat::Text => "text",
                    ReportFormat::Jsonl => "jsonl",
                    ReportFormat::Both => "both",
                }
                .to_owned(),
                _ => unreachable!("KEYS and dump out of sync"),
            };
            let _ = writeln!(out, "{key} = {value}");
        }
        out
    }
}
