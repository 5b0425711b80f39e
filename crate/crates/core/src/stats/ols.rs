use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::tdist::t_sf;
use super::DataTable;
use crate::error::{Error, Result};

/// Relative pivot size below which a design column counts as dependent.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// A fitted OLS model. Coefficient-indexed vectors start with the intercept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionModel {
    pub response: String,
    pub predictors: Vec<String>,
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub p_values: Vec<f64>,
    /// One per predictor (no intercept entry).
    pub standardized_betas: Vec<f64>,
    pub r2: f64,
    pub adjusted_r2: f64,
    pub n: usize,
    pub df_residual: usize,
    #[serde(skip)]
    pub residuals: Vec<f64>,
}

impl RegressionModel {
    pub fn intercept(&self) -> f64 {
        self.coefficients[0]
    }

    /// Coefficient of a named predictor.
    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.predictors
            .iter()
            .position(|p| p == name)
            .map(|i| self.coefficients[i + 1])
    }

    /// p-value of a named predictor.
    pub fn p_value(&self, name: &str) -> Option<f64> {
        self.predictors
            .iter()
            .position(|p| p == name)
            .map(|i| self.p_values[i + 1])
    }

    pub fn equation(&self) -> LinearEquation {
        LinearEquation {
            response: self.response.clone(),
            intercept: self.intercept(),
            terms: self
                .predictors
                .iter()
                .cloned()
                .zip(self.coefficients[1..].iter().copied())
                .collect(),
        }
    }
}

/// `response = intercept + Σ coefficient · predictor`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearEquation {
    pub response: String,
    pub intercept: f64,
    pub terms: Vec<(String, f64)>,
}

impl LinearEquation {
    /// The published three-metric NER equation:
    /// `NER = 86.55 + 0.254 BLEU + 0.924 NIST − 0.221 EBLEU` (scores ×100, NIST raw).
    pub fn reference_ner() -> Self {
        LinearEquation {
            response: "NER".into(),
            intercept: 86.55,
            terms: vec![
                ("BLEU".into(), 0.254),
                ("NIST".into(), 0.924),
                ("EBLEU".into(), -0.221),
            ],
        }
    }

    pub fn predict(&self, scores: &HashMap<String, f64>) -> Result<f64> {
        let mut value = self.intercept;
        for (name, coef) in &self.terms {
            let x = scores
                .get(name)
                .ok_or_else(|| Error::MissingPredictor(name.clone()))?;
            value += coef * x;
        }
        Ok(value)
    }
}

impl fmt::Display for LinearEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let precision = f.precision();
        let num = |x: f64| match precision {
            Some(p) => format!("{x:.p$}"),
            None => x.to_string(),
        };
        write!(f, "{} = {}", self.response, num(self.intercept))?;
        for (name, coef) in &self.terms {
            let sign = if coef.is_sign_negative() { '-' } else { '+' };
            write!(f, " {sign} {} * {name}", num(coef.abs()))?;
        }
        Ok(())
    }
}

pub fn predict(model: &RegressionModel, scores: &HashMap<String, f64>) -> Result<f64> {
    model.equation().predict(scores)
}

/// `1 − (1 − r²)(n − 1)/(n − k − 1)`.
pub fn adjusted_r2(r2: f64, n: usize, k: usize) -> Result<f64> {
    if n <= k + 1 {
        return Err(Error::DegenerateDf { n, k });
    }
    Ok(1.0 - (1.0 - r2) * (n - 1) as f64 / (n - k - 1) as f64)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Householder QR of a column-major `n × p` matrix, applied in place to `rhs`.
/// Returns the `p × p` upper factor `R` (row-major) and `Qᵀ rhs`.
fn householder_qr(
    mut cols: Vec<Vec<f64>>,
    mut rhs: Vec<f64>,
    names: &[String],
) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let n = rhs.len();
    let p = cols.len();
    let scales: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    for j in 0..p {
        let norm = cols[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if scales[j] == 0.0 || norm <= RANK_TOLERANCE * scales[j] {
            return Err(Error::RankDeficient {
                column: names[j].clone(),
            });
        }
        let alpha = if cols[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = cols[j][j..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        let reflect = |target: &mut [f64]| {
            let dot: f64 = v.iter().zip(target.iter()).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / vnorm2;
            for (t, vi) in target.iter_mut().zip(&v) {
                *t -= f * vi;
            }
        };
        for col in cols.iter_mut().skip(j) {
            reflect(&mut col[j..n]);
        }
        reflect(&mut rhs[j..n]);
        cols[j][j] = alpha;
        for v in cols[j][j + 1..].iter_mut() {
            *v = 0.0;
        }
    }
    let r: Vec<Vec<f64>> = (0..p)
        .map(|i| (0..p).map(|j| if j >= i { cols[j][i] } else { 0.0 }).collect())
        .collect();
    Ok((r, rhs))
}

#[allow(clippy::needless_range_loop)]
fn invert_upper(r: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let p = r.len();
    let mut inv = vec![vec![0.0; p]; p];
    for col in 0..p {
        for i in (0..=col).rev() {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for k in i + 1..=col {
                s -= r[i][k] * inv[k][col];
            }
            inv[i][col] = s / r[i][i];
        }
    }
    inv
}

/// Ordinary least squares of `response` on `predictors` plus an intercept,
/// with two-sided t-test p-values and standardized coefficients.
pub fn ols_fit(table: &DataTable, response: &str, predictors: &[&str]) -> Result<RegressionModel> {
    let y = table.column(response)?;
    let xs: Vec<Vec<f64>> = predictors
        .iter()
        .map(|p| table.column(p))
        .collect::<Result<_>>()?;
    let n = y.len();
    let k = predictors.len();
    if n <= k + 1 {
        return Err(Error::TooFewRows {
            rows: n,
            needed: k + 1,
        });
    }
    let mut names = vec!["(Constant)".to_owned()];
    names.extend(predictors.iter().map(|p| (*p).to_owned()));
    let mut design = vec![vec![1.0; n]];
    design.extend(xs.iter().cloned());

    let (r, qty) = householder_qr(design, y.clone(), &names)?;
    let p = k + 1;
    let mut coefficients = vec![0.0; p];
    for i in (0..p).rev() {
        let mut s = qty[i];
        for j in i + 1..p {
            s -= r[i][j] * coefficients[j];
        }
        coefficients[i] = s / r[i][i];
    }

    let residuals: Vec<f64> = (0..n)
        .map(|i| {
            let fitted = coefficients[0]
                + xs.iter()
                    .zip(&coefficients[1..])
                    .map(|(x, b)| x[i] * b)
                    .sum::<f64>();
            y[i] - fitted
        })
        .collect();
    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let y_mean = mean(&y);
    let tss: f64 = y.iter().map(|v| (v - y_mean).powi(2)).sum();
    if tss == 0.0 {
        return Err(Error::ConstantResponse);
    }
    let r2 = 1.0 - rss / tss;
    let df_residual = n - k - 1;
    let sigma2 = rss / df_residual as f64;

    let r_inv = invert_upper(&r);
    let std_errors: Vec<f64> = (0..p)
        .map(|i| (sigma2 * r_inv[i].iter().map(|v| v * v).sum::<f64>()).sqrt())
        .collect();
    let t_stats: Vec<f64> = coefficients
        .iter()
        .zip(&std_errors)
        .map(|(&b, &se)| {
            if se > 0.0 {
                b / se
            } else if b == 0.0 {
                0.0
            } else {
                f64::INFINITY.copysign(b)
            }
        })
        .collect();
    let p_values = t_stats.iter().map(|&t| t_sf(t, df_residual as u64)).collect();
    let y_sd = sample_sd(&y);
    let standardized_betas = xs
        .iter()
        .zip(&coefficients[1..])
        .map(|(x, b)| b * sample_sd(x) / y_sd)
        .collect();

    Ok(RegressionModel {
        response: response.to_owned(),
        predictors: predictors.iter().map(|p| (*p).to_owned()).collect(),
        coefficients,
        std_errors,
        t_stats,
        p_values,
        standardized_betas,
        r2,
        adjusted_r2: adjusted_r2(r2, n, k)?,
        n,
        df_residual,
        residuals,
    })
}
