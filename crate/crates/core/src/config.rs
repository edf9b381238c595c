//! JSON run configuration shared by every subcommand.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::load::Mode;
use crate::params::StackParameters;

pub const SCHEMA: &str = "winkler-limit/1";

/// Elements per layer for single solves when neither the config nor the
/// command line sets one.
pub const DEFAULT_MESH_N: usize = 64;

/// ```
/// use winkler_limit::config::RunConfig;
///
/// let cfg = RunConfig::from_json(r#"{
///     "schema": "winkler-limit/1",
///     "parameters": {"lambda_f": 1, "mu_f": 1, "rho_E": 1, "rho_nu": 1,
///                    "alpha": 0, "beta": 2, "h_f": 1, "h_b": 1,
///                    "L": 1, "cell": [1, 1]},
///     "load": [{"n": [1, 0], "phi": {"11": [1, 0]}}]
/// }"#).unwrap();
/// assert_eq!(cfg.load.len(), 1);
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    pub parameters: StackParameters,
    #[serde(default)]
    pub load: Vec<Mode>,
    /// Thickness parameters; empty means the default geometric sweep.
    #[serde(default)]
    pub eps: Vec<f64>,
    /// Elements per layer.
    #[serde(default)]
    pub mesh_n: Option<usize>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    /// Record wall-clock times in sweep reports (breaks bit-reproducibility).
    #[serde(default)]
    pub timing: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA {
            return Err(Error::Config(format!(
                "unsupported schema {:?}, expected {SCHEMA:?}",
                self.schema
            )));
        }
        self.parameters.validate()?;
        for m in &self.load {
            m.validate()?;
        }
        check_eps(&self.eps)?;
        if let Some(n) = self.mesh_n {
            check_mesh_n(n)?;
        }
        Ok(())
    }

    /// Applies command-line overrides, re-validating what they touch.
    pub fn with_overrides(mut self, eps: Option<Vec<f64>>, mesh_n: Option<usize>) -> Result<Self> {
        if let Some(e) = eps {
            check_eps(&e)?;
            self.eps = e;
        }
        if let Some(n) = mesh_n {
            check_mesh_n(n)?;
            self.mesh_n = Some(n);
        }
        Ok(self)
    }

    pub fn eps_or_default(&self) -> Vec<f64> {
        if self.eps.is_empty() {
            crate::convergence::default_eps()
        } else {
            self.eps.clone()
        }
    }
}

fn check_eps(eps: &[f64]) -> Result<()> {
    match eps.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        Some(e) => Err(Error::Config(format!("eps must be positive and finite, got {e}"))),
        None => Ok(()),
    }
}

fn check_mesh_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Config(format!("mesh_n must be at least 2, got {n}")));
    }
    Ok(())
}

/// Parses a comma-separated list such as `0.5,0.25,1e-2`.
pub fn parse_eps_list(s: &str) -> Result<Vec<f64>> {
    let v = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("bad eps value {t:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    check_eps(&v)?;
    Ok(v)
}
