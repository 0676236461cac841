//! Flat `key = value` configuration with validation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::contact_model::{JChoice, LambdaProfile};
use crate::error::{Error, Result};
use crate::spectral_grid::Grid;

/// Environment variable naming the output directory when `--out` is absent.
pub const OUT_DIR_ENV: &str = "CONTACT_LAB_OUT";

/// Which complex structure the model uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JKind {
    Default,
    Anisotropic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub grid: usize,
    pub band: usize,
    pub seed: u64,
    pub s_max: usize,
    /// Tolerance of identity checks on spectral operators.
    pub spectral_tol: f64,
    /// Relative residual at which CG stops.
    pub solver_tol: f64,
    pub cg_max_iterations: usize,
    /// Contact defect at which the `Ψ` iteration stops.
    pub psi_tol: f64,
    pub psi_max_iterations: usize,
    pub j_choice: JKind,
    /// `ε` in `λ(z) = exp(ε cos z)` for the anisotropic structure.
    pub lambda_eps: f64,
    /// Bound on `sup |g|` for generating functions.
    pub smallness: f64,
    /// Bound on `sup |v|` for the exponential map.
    pub flow_budget: f64,
    /// Random samples per ratio report.
    pub samples: usize,
    /// Worker threads; `0` keeps the default pool.
    pub jobs: usize,
    /// Overrides of individual check thresholds, keyed by check name.
    pub thresholds: BTreeMap<String, f64>,
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            grid: 16,
            band: 4,
            seed: 7,
            s_max: 4,
            spectral_tol: 1e-10,
            solver_tol: 1e-10,
            cg_max_iterations: 5000,
            psi_tol: 1e-10,
            psi_max_iterations: 20,
            j_choice: JKind::Default,
            lambda_eps: 0.3,
            smallness: 0.1,
            flow_budget: 0.5,
            samples: 20,
            jobs: 1,
            thresholds: BTreeMap::new(),
            out: PathBuf::from("results"),
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse `{value}` for `{key}`")))
}

impl ExperimentConfig {
    /// Reads a config file on top of the defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "grid" => self.grid = parse(key, value)?,
            "band" => self.band = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "s_max" => self.s_max = parse(key, value)?,
            "spectral_tol" => self.spectral_tol = parse(key, value)?,
            "solver_tol" => self.solver_tol = parse(key, value)?,
            "cg_max_iterations" => self.cg_max_iterations = parse(key, value)?,
            "psi_tol" => self.psi_tol = parse(key, value)?,
            "psi_max_iterations" => self.psi_max_iterations = parse(key, value)?,
            "j_choice" => {
                self.j_choice = match value {
                    "default" => JKind::Default,
                    "anisotropic" => JKind::Anisotropic,
                    _ => return Err(Error::Config(format!("unknown j_choice `{value}`"))),
                }
            }
            "lambda_eps" => self.lambda_eps = parse(key, value)?,
            "smallness" => self.smallness = parse(key, value)?,
            "flow_budget" => self.flow_budget = parse(key, value)?,
            "samples" => self.samples = parse(key, value)?,
            "jobs" => self.jobs = parse(key, value)?,
            "out" => self.out = PathBuf::from(value),
            _ => match key.strip_prefix("threshold.") {
                Some(name) if !name.is_empty() => {
                    self.thresholds.insert(name.to_string(), parse(key, value)?);
                }
                _ => return Err(Error::Config(format!("unknown key `{key}`"))),
            },
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        Grid::new(self.grid).map_err(|e| Error::Config(e.to_string()))?;
        if self.band == 0 || 2 * self.band >= self.grid {
            return Err(Error::Config(format!(
                "band {} must satisfy 0 < band < N/2 = {}",
                self.band,
                self.grid / 2
            )));
        }
        if self.s_max > crate::folland_stein::S_MAX {
            return Err(Error::Config(format!(
                "s_max {} exceeds {}",
                self.s_max,
                crate::folland_stein::S_MAX
            )));
        }
        let positive = [
            ("spectral_tol", self.spectral_tol),
            ("solver_tol", self.solver_tol),
            ("psi_tol", self.psi_tol),
            ("smallness", self.smallness),
            ("flow_budget", self.flow_budget),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in &self.thresholds {
            if !(v.is_finite() && *v > 0.0) {
                return Err(Error::Config(format!("threshold.{name} must be positive, got {v}")));
            }
        }
        if !self.lambda_eps.is_finite() {
            return Err(Error::Config("lambda_eps must be finite".into()));
        }
        if self.cg_max_iterations == 0 || self.samples == 0 {
            return Err(Error::Config("iteration and sample counts must be positive".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.grid).expect("validated")
    }

    pub fn j(&self) -> JChoice {
        match self.j_choice {
            JKind::Default => JChoice::Default,
            JKind::Anisotropic => JChoice::Anisotropic(LambdaProfile::ExpCos { eps: self.lambda_eps }),
        }
    }

    /// Threshold for a check, after overrides.
    pub fn threshold(&self, name: &str, default: f64) -> f64 {
        self.thresholds.get(name).copied().unwrap_or(default)
    }
}
