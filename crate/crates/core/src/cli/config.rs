use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;

use crate::coin::{Basis, CoinSpec, CoinState, Family};
use crate::walk::DEFAULT_MAX_STEPS;

use super::CliError;

/// Deviations of Σ|a|² from 1 up to this are accepted silently.
const SILENT_RENORMALIZE: f64 = 1e-9;
/// Deviations up to this are renormalized with a warning; larger ones fail.
const WARN_RENORMALIZE: f64 = 1e-6;

/// One run as read from the JSON config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: Family,
    pub parameter: f64,
    #[serde(default = "default_basis")]
    pub initial_basis: Basis,
    /// (re, im) pairs in the order of `initial_basis`.
    pub initial_amplitudes: [[f64; 2]; 3],
    pub steps: usize,
    #[serde(default)]
    pub grid_points: Option<usize>,
    #[serde(default)]
    pub orders: Option<Vec<u32>>,
    #[serde(default)]
    pub m_max: Option<usize>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_basis() -> Basis {
    Basis::Eigen
}

/// A config that passed validation.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidRun {
    pub config: RunConfig,
    pub spec: CoinSpec,
    pub state: CoinState,
    pub warnings: Vec<String>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(self) -> Result<ValidRun, CliError> {
        let spec = CoinSpec::new(self.family, self.parameter)
            .map_err(|e| CliError::Validation(format!("field `parameter`: {e}")))?;
        if self.steps > DEFAULT_MAX_STEPS {
            return Err(CliError::Validation(format!(
                "field `steps`: {} exceeds the budget of {DEFAULT_MAX_STEPS}",
                self.steps
            )));
        }
        let amps = self.initial_amplitudes.map(|[re, im]| Complex64::new(re, im));
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let dev = (norm_sqr - 1.0).abs();
        if !(dev <= WARN_RENORMALIZE) {
            return Err(CliError::Validation(format!(
                "field `initial_amplitudes`: squared norm {norm_sqr} is not 1"
            )));
        }
        let mut warnings = Vec::new();
        if dev > SILENT_RENORMALIZE {
            warnings.push(format!(
                "initial amplitudes renormalized (squared norm was {norm_sqr})"
            ));
        }
        let state = CoinState::normalized(amps, self.initial_basis)
            .map_err(|e| CliError::Validation(format!("field `initial_amplitudes`: {e}")))?;
        if let Some(n) = self.grid_points {
            check_grid(n)?;
        }
        if let Some(orders) = &self.orders {
            check_orders(orders)?;
        }
        Ok(ValidRun {
            config: self,
            spec,
            state,
            warnings,
        })
    }
}

pub(crate) fn check_grid(n: usize) -> Result<(), CliError> {
    if n < 3 {
        return Err(CliError::Validation(format!(
            "grid size {n} is below the minimum of 3"
        )));
    }
    Ok(())
}

pub(crate) fn check_orders(orders: &[u32]) -> Result<(), CliError> {
    if orders.is_empty() || orders.contains(&0) {
        return Err(CliError::Validation(
            "moment orders must be a non-empty list of positive integers".into(),
        ));
    }
    Ok(())
}
