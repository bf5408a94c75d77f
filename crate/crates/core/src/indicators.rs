//! AMT and the classical citation indicators, evaluable as of any year.
//!
//! A publication is *highly cited* when its cumulative citation count after
//! `x` years reaches `y`. AMT is the highly-cited share of the publications
//! that are at least `x` years old at the evaluation year; younger work is
//! left out of both numerator and denominator because its `c_x` is not yet
//! observable. A researcher with no such publications scores 0.

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Publication, Researcher};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndicatorError {
    #[error("citation threshold must be at least 1, got {0}")]
    InvalidCitationThreshold(u32),
    #[error("publication '{pub_id}' ({year}) is evaluated at {as_of}, before it appeared")]
    BeforePublication { pub_id: String, year: i32, as_of: i32 },
    #[error("publication '{pub_id}' ({year}) is younger than {required} years at {as_of}")]
    TooYoung {
        pub_id: String,
        year: i32,
        as_of: i32,
        required: u32,
    },
}

/// `(x, y)`: time threshold in years and citation threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmtParams {
    time_threshold: u32,
    citation_threshold: u32,
}

impl Default for AmtParams {
    fn default() -> Self {
        Self {
            time_threshold: 3,
            citation_threshold: 15,
        }
    }
}

impl AmtParams {
    pub fn new(time_threshold: u32, citation_threshold: u32) -> Result<Self, IndicatorError> {
        if citation_threshold == 0 {
            return Err(IndicatorError::InvalidCitationThreshold(citation_threshold));
        }
        Ok(Self {
            time_threshold,
            citation_threshold,
        })
    }

    pub fn time_threshold(&self) -> u32 {
        self.time_threshold
    }

    pub fn citation_threshold(&self) -> u32 {
        self.citation_threshold
    }
}

/// Cumulative citations known by the end of `as_of`; clamps to the last
/// observation when the series ends earlier.
pub fn citations_as_of(p: &Publication, as_of: i32) -> Result<u64, IndicatorError> {
    if as_of < p.year {
        return Err(IndicatorError::BeforePublication {
            pub_id: p.pub_id.clone(),
            year: p.year,
            as_of,
        });
    }
    Ok(p.cumulative_at((as_of - p.year) as usize))
}

/// `c_x >= y`, with `c_x` clamped to the last observation. Assumes the
/// publication is at least `x` years old; see [`is_highly_cited`] for the
/// checked form.
pub fn reaches_threshold(p: &Publication, params: AmtParams) -> bool {
    p.cumulative_at(params.time_threshold as usize) >= u64::from(params.citation_threshold)
}

pub fn is_highly_cited(p: &Publication, params: AmtParams, as_of: i32) -> Result<bool, IndicatorError> {
    if i64::from(as_of) - i64::from(p.year) < i64::from(params.time_threshold) {
        return Err(IndicatorError::TooYoung {
            pub_id: p.pub_id.clone(),
            year: p.year,
            as_of,
            required: params.time_threshold,
        });
    }
    Ok(reaches_threshold(p, params))
}

/// Latest publication year whose `c_x` is observable at `as_of`.
pub fn amt_cutoff_year(params: AmtParams, as_of: i32) -> i32 {
    as_of.saturating_sub(params.time_threshold as i32)
}

/// `(highly cited, eligible)` counts behind [`amt_score`].
pub fn amt_counts(r: &Researcher, params: AmtParams, as_of: i32) -> (usize, usize) {
    let cutoff = amt_cutoff_year(params, as_of);
    r.publications
        .iter()
        .filter(|p| p.year <= cutoff)
        .fold((0, 0), |(hits, n), p| {
            (hits + usize::from(reaches_threshold(p, params)), n + 1)
        })
}

pub fn amt_score(r: &Researcher, params: AmtParams, as_of: i32) -> f64 {
    match amt_counts(r, params, as_of) {
        (_, 0) => 0.0,
        (hits, n) => hits as f64 / n as f64,
    }
}

/// Largest `h` such that at least `h` entries are `>= h`.
pub fn h_index(citation_counts: &[u64]) -> usize {
    let mut sorted = citation_counts.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|&(i, &c)| c >= (i + 1) as u64)
        .count()
}

pub fn i10_index(citation_counts: &[u64]) -> usize {
    citation_counts.iter().filter(|&&c| c >= 10).count()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorReport {
    pub researcher_id: String,
    pub as_of_year: i32,
    pub amt: f64,
    pub h_index: usize,
    pub i10_index: usize,
    pub citation_count: u64,
    pub academic_age: i32,
    /// Size of the AMT denominator (publications at least `x` years old).
    pub eligible_pub_count: usize,
}

/// All indicators for `r` as of `as_of`. H-index, i10-index and the citation
/// total use every publication out by `as_of`, with counts truncated to what
/// was known that year.
pub fn indicator_report(r: &Researcher, params: AmtParams, as_of: i32) -> IndicatorReport {
    let counts: Vec<u64> = r
        .publications
        .iter()
        .filter(|p| p.year <= as_of)
        .map(|p| p.cumulative_at((as_of - p.year) as usize))
        .collect();
    let (_, eligible) = amt_counts(r, params, as_of);
    IndicatorReport {
        researcher_id: r.researcher_id.clone(),
        as_of_year: as_of,
        amt: amt_score(r, params, as_of),
        h_index: h_index(&counts),
        i10_index: i10_index(&counts),
        citation_count: counts.iter().sum(),
        academic_age: r.academic_age(as_of).unwrap_or(0),
        eligible_pub_count: eligible,
    }
}

pub const REPORT_CSV_HEADER: &str =
    "researcher_id,as_of_year,amt,h_index,i10_index,citation_count,academic_age,eligible_pub_count";

/// CSV with AMT rounded to 4 decimals.
pub fn write_reports_csv<W: Write>(reports: &[IndicatorReport], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_CSV_HEADER.split(','))?;
    for r in reports {
        w.write_record([
            r.researcher_id.clone(),
            r.as_of_year.to_string(),
            format!("{:.4}", r.amt),
            r.h_index.to_string(),
            r.i10_index.to_string(),
            r.citation_count.to_string(),
            r.academic_age.to_string(),
            r.eligible_pub_count.to_string(),
        ])?;
    }
    w.flush()
}
