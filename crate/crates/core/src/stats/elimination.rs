use serde::{Deserialize, Serialize};

use super::ols::{ols_fit, RegressionModel};
use super::DataTable;
use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EliminationStep {
    /// 1-based stage number.
    pub step: usize,
    pub model: RegressionModel,
    /// Predictor dropped after this stage; `None` on the final stage.
    pub removed: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EliminationTrace {
    pub alpha: f64,
    pub steps: Vec<EliminationStep>,
}

impl EliminationTrace {
    pub fn final_model(&self) -> &RegressionModel {
        &self.steps.last().expect("trace holds at least one stage").model
    }

    pub fn surviving(&self) -> &[String] {
        &self.final_model().predictors
    }
}

/// Backward elimination: refit, drop the predictor with the largest p-value
/// above `alpha` (ties drop the later-listed one), until every predictor is
/// significant or one remains.
pub fn backward_eliminate(
    table: &DataTable,
    response: &str,
    candidates: &[&str],
    alpha: f64,
) -> Result<EliminationTrace> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if candidates.is_empty() {
        return Err(Error::InvalidConfig("no candidate predictors".into()));
    }
    let mut remaining: Vec<&str> = candidates.to_vec();
    let mut steps = Vec::new();
    loop {
        let model = ols_fit(table, response, &remaining)?;
        let mut worst: Option<(usize, f64)> = None;
        for (i, &p) in model.p_values[1..].iter().enumerate() {
            if p > alpha && worst.is_none_or(|(_, wp)| p >= wp) {
                worst = Some((i, p));
            }
        }
        let step = steps.len() + 1;
        match worst {
            Some((i, _)) if remaining.len() > 1 => {
                let name = remaining.remove(i);
                steps.push(EliminationStep {
                    step,
                    model,
                    removed: Some(name.to_owned()),
                });
            }
            _ => {
                steps.push(EliminationStep {
                    step,
                    model,
                    removed: None,
                });
                break;
            }
        }
    }
    Ok(EliminationTrace { alpha, steps })
}
