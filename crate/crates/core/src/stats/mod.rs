//! Ordinary least squares with t-test inference, standardized coefficients
//! and adjusted R², plus backward elimination over candidate predictors.
//!
//! Fits use a Householder QR of the design matrix; the metric columns this
//! is built for (BLEU, METEOR, EBLEU) are strongly collinear.

mod elimination;
mod ols;
mod table;
pub mod tdist;

pub use elimination::{backward_eliminate, EliminationStep, EliminationTrace, DEFAULT_ALPHA};
pub use ols::{adjusted_r2, ols_fit, predict, LinearEquation, RegressionModel, RANK_TOLERANCE};
pub use table::DataTable;
pub use tdist::{regularized_incomplete_beta, t_sf};
