//! Deterministic statistics kernel: special functions, correlation, rank
//! tests, the Shapiro-Wilk W test, Bonferroni correction and least-squares
//! plane fitting. All p-values are two-sided.

mod correlation;
mod normality;
mod rank;
mod regression;
pub mod special;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use correlation::pearson;
pub use normality::shapiro_wilk;
pub use rank::{
    kruskal_wallis, mann_whitney_u, midranks, u_statistics, wilcoxon_signed_rank, MWU_EXACT_MAX_N, WILCOXON_EXACT_MAX_N,
};
pub use regression::{fit_plane, PlaneFit};
pub use special::{normal_cdf, regularized_incomplete_beta, regularized_incomplete_gamma};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("samples have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("sample is constant")]
    ConstantInput,
    #[error("all pooled values are tied")]
    AllTied,
    #[error("all paired differences are zero")]
    AllZeroDifferences,
    #[error("design matrix is rank deficient (collinear points)")]
    RankDeficient,
    #[error("empty sample")]
    EmptySample,
    #[error("non-finite value in input")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestMethod {
    Pearson,
    MannWhitney,
    KruskalWallis,
    ShapiroWilk,
    WilcoxonSignedRank,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: TestMethod,
    pub statistic: f64,
    pub p_value: f64,
    /// Sample size per group (one entry for single-sample and paired tests).
    pub n: Vec<usize>,
}

impl TestResult {
    pub(crate) fn new(method: TestMethod, statistic: f64, p_value: f64, n: Vec<usize>) -> Self {
        Self {
            method,
            statistic,
            p_value: p_value.clamp(0.0, 1.0),
            n,
        }
    }
}

/// Multiplies every p-value by the family size, capped at 1.
pub fn bonferroni(p_values: &[f64]) -> Result<Vec<f64>, StatsError> {
    if let Some(bad) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(StatsError::Domain(format!("p-value {bad} outside [0, 1]")));
    }
    let m = p_values.len() as f64;
    Ok(p_values.iter().map(|p| (p * m).min(1.0)).collect())
}

pub(crate) fn check_finite(xs: &[f64]) -> Result<(), StatsError> {
    if xs.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(StatsError::NonFinite)
    }
}
