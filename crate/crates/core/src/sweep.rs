//! Sensitivity of the cohort-average AMT to the `(x, y)` thresholds.
//!
//! Every cell of a sweep is evaluated on the same publication set: work at
//! least `max(x_values)` years old at the evaluation year. Holding the
//! denominator fixed keeps the grid monotone (non-decreasing in `x`,
//! non-increasing in `y`), since citation series never decrease.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, Researcher};
use crate::indicators::{amt_score, AmtParams};
use crate::stats::{fit_plane, shapiro_wilk, PlaneFit, StatsError, TestResult};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub x_values: Vec<u32>,
    pub y_values: Vec<u32>,
    /// `cell_means[i][j]` is the mean AMT for `(x_values[i], y_values[j])`.
    pub cell_means: Vec<Vec<f64>>,
}

impl SweepGrid {
    pub fn default_x_values() -> Vec<u32> {
        (1..=6).collect()
    }

    pub fn default_y_values() -> Vec<u32> {
        (5..=40).step_by(5).collect()
    }

    /// `(x, y, mean)` triples in x-major order.
    pub fn cells(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.x_values.iter().enumerate().flat_map(move |(i, &x)| {
            self.y_values
                .iter()
                .enumerate()
                .map(move |(j, &y)| (x, y, self.cell_means[i][j]))
        })
    }

    pub fn is_empty(&self) -> bool {
        self.x_values.is_empty() || self.y_values.is_empty()
    }
}

fn check_axis(name: &str, values: &[u32], min: u32) -> Result<(), SweepError> {
    if values.is_empty() {
        return Err(SweepError::InvalidGrid(format!("{name} values are empty")));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SweepError::InvalidGrid(format!(
            "{name} values must be strictly ascending"
        )));
    }
    if values[0] < min {
        return Err(SweepError::InvalidGrid(format!("{name} values must be >= {min}")));
    }
    Ok(())
}

/// Per-researcher AMT for every cell, on the shared eligible set.
fn researcher_cells(r: &Researcher, x_values: &[u32], y_values: &[u32], cutoff: i32) -> Vec<f64> {
    let eligible: Vec<_> = r.publications.iter().filter(|p| p.year <= cutoff).collect();
    let mut out = vec![0.0; x_values.len() * y_values.len()];
    if eligible.is_empty() {
        return out;
    }
    let n = eligible.len() as f64;
    for (i, &x) in x_values.iter().enumerate() {
        let cx: Vec<u64> = eligible.iter().map(|p| p.cumulative_at(x as usize)).collect();
        for (j, &y) in y_values.iter().enumerate() {
            let hits = cx.iter().filter(|&&c| c >= u64::from(y)).count();
            out[i * y_values.len() + j] = hits as f64 / n;
        }
    }
    out
}

/// Mean AMT over all researchers for each `(x, y)` cell. Researchers are
/// evaluated in parallel; the reduction runs in corpus order, so results do
/// not depend on the thread count.
pub fn run_sweep(corpus: &Corpus, x_values: &[u32], y_values: &[u32], as_of: i32) -> Result<SweepGrid, SweepError> {
    if corpus.is_empty() {
        return Err(SweepError::EmptyCorpus);
    }
    check_axis("x", x_values, 0)?;
    check_axis("y", y_values, 1)?;
    let max_x = *x_values.last().expect("checked non-empty");
    let cutoff = as_of - max_x as i32;

    let per_researcher: Vec<Vec<f64>> = corpus
        .researchers()
        .par_iter()
        .map(|r| researcher_cells(r, x_values, y_values, cutoff))
        .collect();
    let mut sums = vec![0.0; x_values.len() * y_values.len()];
    for cells in &per_researcher {
        for (s, v) in sums.iter_mut().zip(cells) {
            *s += v;
        }
    }
    let n = corpus.len() as f64;
    let cell_means = sums
        .chunks(y_values.len())
        .map(|row| row.iter().map(|s| s / n).collect())
        .collect();
    Ok(SweepGrid {
        x_values: x_values.to_vec(),
        y_values: y_values.to_vec(),
        cell_means,
    })
}

/// Plane fit of the cell means against `(x, y)`.
pub fn fit_sweep(grid: &SweepGrid) -> Result<PlaneFit, SweepError> {
    let pts: Vec<_> = grid.cells().map(|(x, y, c)| (f64::from(x), f64::from(y), c)).collect();
    Ok(fit_plane(&pts)?)
}

pub const DEFAULT_NORMALITY_MAX_N: usize = 5000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subsample {
    pub seed: u64,
    pub population: usize,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalityCheck {
    pub result: TestResult,
    /// Present when the AMT distribution was larger than `max_n` and a
    /// seeded uniform subsample was tested instead.
    pub subsample: Option<Subsample>,
}

/// Shapiro-Wilk on the per-researcher AMT scores at the corpus reference
/// year.
pub fn normality_check(
    corpus: &Corpus,
    params: AmtParams,
    max_n: usize,
    seed: u64,
) -> Result<NormalityCheck, SweepError> {
    if corpus.is_empty() {
        return Err(SweepError::EmptyCorpus);
    }
    let year = corpus.reference_year();
    let scores: Vec<f64> = corpus
        .researchers()
        .iter()
        .map(|r| amt_score(r, params, year))
        .collect();
    normality_of_scores(&scores, max_n, seed)
}

/// The sampling step of [`normality_check`] on precomputed scores.
pub fn normality_of_scores(scores: &[f64], max_n: usize, seed: u64) -> Result<NormalityCheck, SweepError> {
    if scores.len() <= max_n {
        return Ok(NormalityCheck {
            result: shapiro_wilk(scores)?,
            subsample: None,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = sample(&mut rng, scores.len(), max_n).into_vec();
    idx.sort_unstable();
    let picked: Vec<f64> = idx.iter().map(|&i| scores[i]).collect();
    Ok(NormalityCheck {
        result: shapiro_wilk(&picked)?,
        subsample: Some(Subsample {
            seed,
            population: scores.len(),
            size: max_n,
        }),
    })
}

pub const HEATMAP_HEADER: &str = "x,y,mean_amt";

pub fn write_heatmap<W: Write>(grid: &SweepGrid, mut out: W) -> Result<(), SweepError> {
    if grid.is_empty() {
        return Err(SweepError::InvalidGrid("grid has no cells".into()));
    }
    let io = |source| SweepError::Io {
        path: "<writer>".into(),
        source,
    };
    writeln!(out, "{HEATMAP_HEADER}").map_err(io)?;
    for (x, y, m) in grid.cells() {
        writeln!(out, "{x},{y},{m:.4}").map_err(io)?;
    }
    Ok(())
}

/// Heatmap CSV (`x,y,mean_amt`), x-major, means to 4 decimals.
pub fn emit_heatmap(grid: &SweepGrid, path: impl AsRef<Path>) -> Result<(), SweepError> {
    let path = path.as_ref();
    let io = |source| SweepError::Io {
        path: path.display().to_string(),
        source,
    };
    if grid.is_empty() {
        return Err(SweepError::InvalidGrid("grid has no cells".into()));
    }
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    write_heatmap(grid, &mut w)?;
    w.flush().map_err(io)
}
