//! Matched control groups and award-vs-control comparisons.
//!
//! Controls are matched on academic age and publication count, each
//! standardized over the union of treated and pool. Matching is greedy
//! without replacement: the treated researcher whose nearest neighbour is
//! farthest picks first.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::{Corpus, MeanSd, Researcher};
use crate::indicators::{indicator_report, AmtParams, IndicatorReport};
use crate::stats::{mann_whitney_u, wilcoxon_signed_rank, StatsError, TestMethod, TestResult};

pub const MIN_BALANCE_PAIRS: usize = 5;

#[derive(Debug, Error)]
pub enum MatchingError {
    #[error("pool has {pool} researchers but {treated} need a control")]
    PoolTooSmall { treated: usize, pool: usize },
    #[error("researcher '{0}' is in both the treated group and the pool")]
    Overlap(String),
    #[error("researcher '{id}' has no publications by {year}")]
    NoPublications { id: String, year: i32 },
    #[error("duplicate researcher '{0}'")]
    Duplicate(String),
    #[error("unknown researcher id '{0}'")]
    UnknownId(String),
    #[error("treated researcher '{0}' has no award year")]
    MissingAwardYear(String),
    #[error("{0} group is empty")]
    EmptyGroup(&'static str),
    #[error("groups differ in size: {treated} treated, {control} control")]
    GroupSizeMismatch { treated: usize, control: usize },
    #[error("need at least {MIN_BALANCE_PAIRS} pairs for a balance check, got {0}")]
    TooFewPairs(usize),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchedPair {
    pub treated_id: String,
    pub control_id: String,
    /// Euclidean distance in standardized (age, publication count) space.
    pub distance: f64,
}

fn features(r: &Researcher, year: i32) -> Result<(f64, f64), MatchingError> {
    let age = r.academic_age(year).ok_or_else(|| MatchingError::NoPublications {
        id: r.researcher_id.clone(),
        year,
    })?;
    Ok((f64::from(age), r.publication_count_as_of(year) as f64))
}

/// Population mean and standard deviation; a zero spread maps to 1 so the
/// feature passes through unscaled.
fn standardizer(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let sd = var.sqrt();
    (mean, if sd > 0.0 { sd } else { 1.0 })
}

fn by_distance_then_id(a: (f64, &str), b: (f64, &str)) -> Ordering {
    a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1))
}

/// One control per treated researcher, drawn without replacement from
/// `pool`. Features are measured at `reference_year`.
pub fn build_matched_control(
    treated: &[&Researcher],
    pool: &[&Researcher],
    reference_year: i32,
) -> Result<Vec<MatchedPair>, MatchingError> {
    if pool.len() < treated.len() {
        return Err(MatchingError::PoolTooSmall {
            treated: treated.len(),
            pool: pool.len(),
        });
    }
    let mut seen = HashSet::new();
    for r in treated {
        if !seen.insert(r.researcher_id.as_str()) {
            return Err(MatchingError::Duplicate(r.researcher_id.clone()));
        }
    }
    let mut pool_ids = HashSet::new();
    for r in pool {
        if seen.contains(r.researcher_id.as_str()) {
            return Err(MatchingError::Overlap(r.researcher_id.clone()));
        }
        if !pool_ids.insert(r.researcher_id.as_str()) {
            return Err(MatchingError::Duplicate(r.researcher_id.clone()));
        }
    }
    if treated.is_empty() {
        return Ok(Vec::new());
    }

    let t_raw = treated
        .iter()
        .map(|r| features(r, reference_year))
        .collect::<Result<Vec<_>, _>>()?;
    let p_raw = pool
        .iter()
        .map(|r| features(r, reference_year))
        .collect::<Result<Vec<_>, _>>()?;
    let all = t_raw.iter().chain(&p_raw);
    let (ma, sa) = standardizer(all.clone().map(|f| f.0));
    let (mp, sp) = standardizer(all.map(|f| f.1));
    let z = |f: &(f64, f64)| ((f.0 - ma) / sa, (f.1 - mp) / sp);
    let t_z: Vec<_> = t_raw.iter().map(z).collect();
    let p_z: Vec<_> = p_raw.iter().map(z).collect();
    let dist = |a: (f64, f64), b: (f64, f64)| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();

    let nearest = |t: usize, taken: &[bool]| -> Option<(usize, f64)> {
        (0..pool.len())
            .filter(|&j| !taken[j])
            .map(|j| (j, dist(t_z[t], p_z[j])))
            .min_by(|a, b| by_distance_then_id((a.1, &pool[a.0].researcher_id), (b.1, &pool[b.0].researcher_id)))
    };

    let none_taken = vec![false; pool.len()];
    let mut order: Vec<(usize, f64)> = (0..treated.len())
        .map(|t| (t, nearest(t, &none_taken).map_or(0.0, |(_, d)| d)))
        .collect();
    order.sort_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then_with(|| treated[a.0].researcher_id.cmp(&treated[b.0].researcher_id))
    });

    let mut taken = vec![false; pool.len()];
    let mut pairs = vec![None; treated.len()];
    for (t, _) in order {
        let (j, d) = nearest(t, &taken).expect("pool at least as large as treated");
        taken[j] = true;
        pairs[t] = Some(MatchedPair {
            treated_id: treated[t].researcher_id.clone(),
            control_id: pool[j].researcher_id.clone(),
            distance: d,
        });
    }
    Ok(pairs.into_iter().map(|p| p.expect("every treated matched")).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceStatus {
    /// Signed-rank test on the non-zero differences.
    Tested,
    /// Every pair agrees exactly.
    Perfect,
    /// Fewer than five pairs disagree, too few for the signed-rank test.
    NearlyPerfect,
}

/// Paired test result for one matching covariate. When no test can run
/// (`Perfect`, `NearlyPerfect`) the statistic is 0 and p is reported as 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovariateBalance {
    pub result: TestResult,
    pub status: BalanceStatus,
    pub nonzero_differences: usize,
}

impl CovariateBalance {
    pub fn is_perfect(&self) -> bool {
        self.status == BalanceStatus::Perfect
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceReport {
    pub academic_age: CovariateBalance,
    pub publication_count: CovariateBalance,
}

fn covariate_balance(pairs: &[(f64, f64)]) -> Result<CovariateBalance, MatchingError> {
    let nonzero = pairs.iter().filter(|(a, b)| a != b).count();
    let untested = |status| CovariateBalance {
        result: TestResult::new(TestMethod::WilcoxonSignedRank, 0.0, 1.0, vec![nonzero]),
        status,
        nonzero_differences: nonzero,
    };
    match wilcoxon_signed_rank(pairs) {
        Ok(result) => Ok(CovariateBalance {
            result,
            status: BalanceStatus::Tested,
            nonzero_differences: nonzero,
        }),
        Err(StatsError::AllZeroDifferences) => Ok(untested(BalanceStatus::Perfect)),
        Err(StatsError::TooFewObservations { .. }) => Ok(untested(BalanceStatus::NearlyPerfect)),
        Err(e) => Err(e.into()),
    }
}

fn resolve<'a>(corpus: &'a Corpus, id: &str) -> Result<&'a Researcher, MatchingError> {
    corpus.get(id).ok_or_else(|| MatchingError::UnknownId(id.to_string()))
}

/// Wilcoxon signed-rank checks that matched pairs agree on academic age and
/// publication count at `reference_year`.
pub fn verify_balance(
    pairs: &[MatchedPair],
    corpus: &Corpus,
    reference_year: i32,
) -> Result<BalanceReport, MatchingError> {
    if pairs.len() < MIN_BALANCE_PAIRS {
        return Err(MatchingError::TooFewPairs(pairs.len()));
    }
    let mut age = Vec::with_capacity(pairs.len());
    let mut pubs = Vec::with_capacity(pairs.len());
    for p in pairs {
        let t = features(resolve(corpus, &p.treated_id)?, reference_year)?;
        let c = features(resolve(corpus, &p.control_id)?, reference_year)?;
        age.push((t.0, c.0));
        pubs.push((t.1, c.1));
    }
    Ok(BalanceReport {
        academic_age: covariate_balance(&age)?,
        publication_count: covariate_balance(&pubs)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Indicator {
    Amt,
    HIndex,
    I10Index,
    CitationCount,
}

impl Indicator {
    pub const ALL: [Indicator; 4] = [
        Indicator::Amt,
        Indicator::HIndex,
        Indicator::I10Index,
        Indicator::CitationCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Indicator::Amt => "amt",
            Indicator::HIndex => "h_index",
            Indicator::I10Index => "i10_index",
            Indicator::CitationCount => "citation_count",
        }
    }

    fn value(self, r: &IndicatorReport) -> f64 {
        match self {
            Indicator::Amt => r.amt,
            Indicator::HIndex => r.h_index as f64,
            Indicator::I10Index => r.i10_index as f64,
            Indicator::CitationCount => r.citation_count as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "year")]
pub enum TimePoint {
    /// Each pair observed at the treated researcher's earliest award year.
    PrizeYear,
    FinalYear(i32),
}

impl TimePoint {
    pub fn label(self) -> &'static str {
        match self {
            TimePoint::PrizeYear => "prize_year",
            TimePoint::FinalYear(_) => "final_year",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndicatorComparison {
    pub indicator: Indicator,
    pub treated: MeanSd,
    pub control: MeanSd,
    /// `(treated - control) / control * 100`; `None` when the control mean
    /// is zero and the treated mean is not.
    pub relative_difference_percent: Option<f64>,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimePointComparison {
    pub time_point: TimePoint,
    pub indicators: Vec<IndicatorComparison>,
    pub treated_amt: Vec<f64>,
    pub control_amt: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub params: ParamsSummary,
    pub time_points: Vec<TimePointComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub balance: Option<BalanceReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<MatchedPair>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamsSummary {
    pub time_threshold: u32,
    pub citation_threshold: u32,
}

pub fn relative_difference_percent(treated_mean: f64, control_mean: f64) -> Option<f64> {
    if control_mean > 0.0 {
        Some((treated_mean - control_mean) / control_mean * 100.0)
    } else if treated_mean == control_mean {
        Some(0.0)
    } else {
        None
    }
}

fn compare_at(
    time_point: TimePoint,
    treated: &[&Researcher],
    control: &[&Researcher],
    years: &[i32],
    params: AmtParams,
) -> Result<TimePointComparison, MatchingError> {
    let reports = |group: &[&Researcher]| -> Vec<IndicatorReport> {
        group
            .par_iter()
            .zip(years.par_iter())
            .map(|(r, &y)| indicator_report(r, params, y))
            .collect()
    };
    let t_reports = reports(treated);
    let c_reports = reports(control);
    let mut indicators = Vec::with_capacity(Indicator::ALL.len());
    for ind in Indicator::ALL {
        let t: Vec<f64> = t_reports.iter().map(|r| ind.value(r)).collect();
        let c: Vec<f64> = c_reports.iter().map(|r| ind.value(r)).collect();
        let (ts, cs) = (MeanSd::of(&t), MeanSd::of(&c));
        indicators.push(IndicatorComparison {
            indicator: ind,
            treated: ts,
            control: cs,
            relative_difference_percent: relative_difference_percent(ts.mean, cs.mean),
            p_value: mann_whitney_u(&t, &c)?.p_value,
        });
    }
    Ok(TimePointComparison {
        time_point,
        indicators,
        treated_amt: t_reports.iter().map(|r| r.amt).collect(),
        control_amt: c_reports.iter().map(|r| r.amt).collect(),
    })
}

/// Compares paired groups (`control[i]` matched to `treated[i]`) at each
/// treated researcher's prize year and at `final_year`.
pub fn compare_groups(
    treated: &[&Researcher],
    control: &[&Researcher],
    params: AmtParams,
    final_year: i32,
) -> Result<ComparisonReport, MatchingError> {
    if treated.is_empty() {
        return Err(MatchingError::EmptyGroup("treated"));
    }
    if control.is_empty() {
        return Err(MatchingError::EmptyGroup("control"));
    }
    if treated.len() != control.len() {
        return Err(MatchingError::GroupSizeMismatch {
            treated: treated.len(),
            control: control.len(),
        });
    }
    let prize_years = treated
        .iter()
        .map(|r| {
            r.first_award_year()
                .ok_or_else(|| MatchingError::MissingAwardYear(r.researcher_id.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let final_years = vec![final_year; treated.len()];
    Ok(ComparisonReport {
        params: ParamsSummary {
            time_threshold: params.time_threshold(),
            citation_threshold: params.citation_threshold(),
        },
        time_points: vec![
            compare_at(TimePoint::PrizeYear, treated, control, &prize_years, params)?,
            compare_at(TimePoint::FinalYear(final_year), treated, control, &final_years, params)?,
        ],
        balance: None,
        pairs: Vec::new(),
    })
}

/// Treated researchers, their matched controls and the remaining pool drawn
/// from `corpus`: non-award-winners outside the treated set.
pub fn default_pool<'a>(corpus: &'a Corpus, treated_ids: &[String]) -> Vec<&'a Researcher> {
    let treated: HashSet<&str> = treated_ids.iter().map(String::as_str).collect();
    corpus
        .researchers()
        .iter()
        .filter(|r| !r.is_award_winner() && !treated.contains(r.researcher_id.as_str()))
        .collect()
}

/// End-to-end pipeline: match, check balance, compare.
pub fn matched_comparison(
    corpus: &Corpus,
    treated_ids: &[String],
    pool: &[&Researcher],
    params: AmtParams,
    final_year: i32,
) -> Result<ComparisonReport, MatchingError> {
    let treated = treated_ids
        .iter()
        .map(|id| resolve(corpus, id))
        .collect::<Result<Vec<_>, _>>()?;
    let pairs = build_matched_control(&treated, pool, corpus.reference_year())?;
    let balance = verify_balance(&pairs, corpus, corpus.reference_year())?;
    let by_id: BTreeMap<&str, &Researcher> = pool.iter().map(|r| (r.researcher_id.as_str(), *r)).collect();
    let control: Vec<&Researcher> = pairs.iter().map(|p| by_id[p.control_id.as_str()]).collect();
    let mut report = compare_groups(&treated, &control, params, final_year)?;
    report.balance = Some(balance);
    report.pairs = pairs;
    Ok(report)
}

pub const COMPARISON_CSV_HEADER: &str = "time_point,row,amt,h_index,i10_index,citation_count";

fn fmt4(v: f64) -> String {
    format!("{v:.4}")
}

/// Table layout: one column per indicator, row groups per time point.
pub fn write_comparison_csv<W: Write>(report: &ComparisonReport, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{COMPARISON_CSV_HEADER}")?;
    type RowFn = fn(&IndicatorComparison) -> String;
    let rows: [(&str, RowFn); 6] = [
        ("treated_mean", |c| fmt4(c.treated.mean)),
        ("treated_sd", |c| fmt4(c.treated.sd)),
        ("control_mean", |c| fmt4(c.control.mean)),
        ("control_sd", |c| fmt4(c.control.sd)),
        ("relative_difference_percent", |c| {
            c.relative_difference_percent.map_or_else(|| "NA".into(), fmt4)
        }),
        ("p_value", |c| fmt4(c.p_value)),
    ];
    for tp in &report.time_points {
        for (name, cell) in rows {
            let cells: Vec<String> = tp.indicators.iter().map(cell).collect();
            writeln!(out, "{},{name},{}", tp.time_point.label(), cells.join(","))?;
        }
    }
    Ok(())
}

pub const DISTRIBUTION_CSV_HEADER: &str = "group,time_point,amt";

pub fn write_distribution_csv<W: Write>(report: &ComparisonReport, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{DISTRIBUTION_CSV_HEADER}")?;
    for tp in &report.time_points {
        for (group, values) in [("treated", &tp.treated_amt), ("control", &tp.control_amt)] {
            for v in values {
                writeln!(out, "{group},{},{v:.4}", tp.time_point.label())?;
            }
        }
    }
    Ok(())
}

/// Long-format AMT scores per group and time point.
pub fn emit_distribution_data(report: &ComparisonReport, path: impl AsRef<Path>) -> Result<(), MatchingError> {
    let path = path.as_ref();
    if report
        .time_points
        .iter()
        .any(|tp| tp.treated_amt.is_empty() || tp.control_amt.is_empty())
    {
        return Err(MatchingError::EmptyGroup("distribution"));
    }
    let io = |source| MatchingError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    write_distribution_csv(report, &mut w).map_err(io)?;
    w.flush().map_err(io)
}
