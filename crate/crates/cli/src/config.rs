use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::args::{FormatArg, ModelArg, RouteArg, ScalingArg, VariantArg};
use crate::error::CliError;

/// Every job parameter after merging the config file under the flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobConfig {
    pub xi: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub t_step: f64,
    pub order: usize,
    pub h: f64,
    pub tail: Option<f64>,
    pub route: RouteArg,
    pub y_start: f64,
    pub variant: Option<VariantArg>,
    pub ensemble: Option<VariantArg>,
    pub model: Option<ModelArg>,
    pub n: Option<usize>,
    pub a: Option<f64>,
    pub alpha: Option<f64>,
    pub cols: Option<usize>,
    pub compare: bool,
    pub difference: bool,
    pub count: usize,
    pub seed: u64,
    pub scaling: Option<ScalingArg>,
    pub bins: Option<usize>,
    pub suite: Vec<String>,
    pub out: Option<PathBuf>,
    pub format: FormatArg,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            xi: 1.0,
            t_min: -8.0,
            t_max: 4.0,
            t_step: 0.05,
            order: 96,
            h: 1e-3,
            tail: None,
            route: RouteArg::Operator,
            y_start: 8.0,
            variant: None,
            ensemble: None,
            model: None,
            n: None,
            a: None,
            alpha: None,
            cols: None,
            compare: false,
            difference: false,
            count: 100_000,
            seed: 1,
            scaling: None,
            bins: None,
            suite: vec![],
            out: None,
            format: FormatArg::Csv,
        }
    }
}

impl JobConfig {
    /// Config file values overlaid by the explicitly given flags.
    pub fn resolve(file: Option<&Path>, flags: serde_json::Value) -> Result<Self, CliError> {
        let mut merged = match file {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
                serde_json::from_str::<serde_json::Value>(&text)
                    .map_err(|e| CliError::Usage(format!("config {}: {e}", p.display())))?
            }
            None => serde_json::json!({}),
        };
        let obj =
            merged.as_object_mut().ok_or_else(|| CliError::Usage("config file must hold a JSON object".into()))?;
        if let serde_json::Value::Object(f) = flags {
            obj.extend(f);
        }
        serde_json::from_value(merged).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        let ok = self.t_min < self.t_max && self.t_step > 0.0 && self.t_min.is_finite() && self.t_max.is_finite();
        if !ok {
            return Err(CliError::Usage(format!(
                "need t_min < t_max and t_step > 0 (got {}, {}, {})",
                self.t_min, self.t_max, self.t_step
            )));
        }
        let n = ((self.t_max - self.t_min) / self.t_step + 1e-9).floor() as usize;
        Ok((0..=n).map(|i| self.t_min + i as f64 * self.t_step).collect())
    }

    /// `xi` in `[0, 1]`; zero is accepted and gives trivial output.
    pub fn check_xi(&self) -> Result<(), CliError> {
        if !(0.0..=1.0).contains(&self.xi) {
            return Err(CliError::Usage(format!("xi = {} must lie in [0, 1]", self.xi)));
        }
        Ok(())
    }

    pub fn check_order(&self) -> Result<(), CliError> {
        if self.order < 8 {
            return Err(CliError::Usage(format!("order {} is below 8", self.order)));
        }
        Ok(())
    }

    pub fn out_or(&self, default: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(default))
    }
}
