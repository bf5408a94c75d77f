//! Bibliometric data model, ingestion, cohort eligibility and summary
//! statistics.

mod io;
mod synthetic;

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{load_corpus, parse_csv, parse_jsonl, save_corpus, write_csv, write_jsonl};
pub use synthetic::{generate_synthetic, SyntheticConfig};

/// Earliest publication year accepted by validation.
pub const MIN_PUBLICATION_YEAR: i32 = 1900;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line:{line} field:{field} reason:{reason}")]
    Parse { line: usize, field: String, reason: String },
    #[error("line:{line} field:{field} reason:{reason}")]
    Invalid { line: usize, field: String, reason: String },
    #[error("line:{line} field:{field} reason:duplicate id '{id}'")]
    DuplicateId { line: usize, field: String, id: String },
    #[error("invalid eligibility rule: {0}")]
    InvalidRule(String),
    #[error("invalid synthetic config: {0}")]
    InvalidConfig(String),
    #[error("corpus is empty")]
    Empty,
}

impl CorpusError {
    /// True for errors caused by the content of the data rather than by I/O.
    pub fn is_validation(&self) -> bool {
        !matches!(self, CorpusError::Io { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Male,
    Female,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Continent {
    #[serde(rename = "EU")]
    Europe,
    #[serde(rename = "NA")]
    NorthAmerica,
    #[serde(rename = "AS")]
    Asia,
    #[serde(rename = "AF")]
    Africa,
    #[serde(rename = "OC")]
    Oceania,
    #[serde(rename = "OTHER")]
    OtherUnknown,
}

impl Continent {
    pub const ALL: [Continent; 6] = [
        Continent::Europe,
        Continent::NorthAmerica,
        Continent::Asia,
        Continent::Africa,
        Continent::Oceania,
        Continent::OtherUnknown,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Continent::Europe => "EU",
            Continent::NorthAmerica => "NA",
            Continent::Asia => "AS",
            Continent::Africa => "AF",
            Continent::Oceania => "OC",
            Continent::OtherUnknown => "OTHER",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.code() == code)
    }
}

impl Gender {
    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Male => "male",
            Gender::Female => "female",
            Gender::Unknown => "unknown",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "male" => Some(Gender::Male),
            "female" => Some(Gender::Female),
            "unknown" => Some(Gender::Unknown),
            _ => None,
        }
    }
}

/// One publication. `citation_series[i]` is the cumulative citation count at the
/// end of the `i`-th year after publication (index 0 is the publication year).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Publication {
    pub pub_id: String,
    pub year: i32,
    pub is_field_core: bool,
    pub citation_series: Vec<u64>,
}

impl Publication {
    /// Cumulative citations at offset `i`, clamped to the last observation.
    pub fn cumulative_at(&self, offset: usize) -> u64 {
        let last = self.citation_series.len().saturating_sub(1);
        self.citation_series.get(offset.min(last)).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Researcher {
    pub researcher_id: String,
    pub name: String,
    pub gender: Gender,
    pub continent: Continent,
    pub award_years: Vec<i32>,
    pub publications: Vec<Publication>,
}

impl Researcher {
    pub fn first_publication_year(&self) -> Option<i32> {
        self.publications.iter().map(|p| p.year).min()
    }

    pub fn last_publication_year(&self) -> Option<i32> {
        self.publications.iter().map(|p| p.year).max()
    }

    /// Years since first publication, counting only work published by `as_of`.
    pub fn academic_age(&self, as_of: i32) -> Option<i32> {
        self.publications
            .iter()
            .map(|p| p.year)
            .filter(|&y| y <= as_of)
            .min()
            .map(|first| as_of - first)
    }

    pub fn publication_count_as_of(&self, as_of: i32) -> usize {
        self.publications.iter().filter(|p| p.year <= as_of).count()
    }

    pub fn first_award_year(&self) -> Option<i32> {
        self.award_years.iter().copied().min()
    }

    pub fn is_award_winner(&self) -> bool {
        !self.award_years.is_empty()
    }
}

/// Validated, immutable collection of researchers observed up to
/// `reference_year`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    researchers: Vec<Researcher>,
    reference_year: i32,
}

impl Corpus {
    /// Validates every invariant and builds the corpus. Error line numbers
    /// are 1-based researcher positions.
    pub fn new(researchers: Vec<Researcher>, reference_year: i32) -> Result<Self, CorpusError> {
        let lines: Vec<usize> = (1..=researchers.len()).collect();
        Self::with_lines(researchers, reference_year, &lines)
    }

    /// Like [`Corpus::new`], with the reference year inferred as the last
    /// calendar year covered by any citation series.
    pub fn with_inferred_reference_year(researchers: Vec<Researcher>) -> Result<Self, CorpusError> {
        let year = infer_reference_year(&researchers);
        Self::new(researchers, year)
    }

    pub(crate) fn with_lines(
        researchers: Vec<Researcher>,
        reference_year: i32,
        lines: &[usize],
    ) -> Result<Self, CorpusError> {
        let current_year = current_year();
        let mut seen = HashSet::new();
        for (r, &line) in researchers.iter().zip(lines) {
            validate_researcher(r, line, current_year)?;
            if !seen.insert(r.researcher_id.as_str()) {
                return Err(CorpusError::DuplicateId {
                    line,
                    field: "researcher_id".into(),
                    id: r.researcher_id.clone(),
                });
            }
            for p in &r.publications {
                if p.year > reference_year {
                    return Err(invalid(
                        line,
                        "year",
                        format!(
                            "publication '{}' of researcher '{}' is dated {} after reference year {}",
                            p.pub_id, r.researcher_id, p.year, reference_year
                        ),
                    ));
                }
                let max_len = (reference_year - p.year + 1) as usize;
                if p.citation_series.len() > max_len {
                    return Err(invalid(
                        line,
                        "citation_series",
                        format!(
                            "publication '{}' of researcher '{}' has {} yearly observations, at most {} fit before reference year {}",
                            p.pub_id,
                            r.researcher_id,
                            p.citation_series.len(),
                            max_len,
                            reference_year
                        ),
                    ));
                }
            }
        }
        Ok(Self {
            researchers,
            reference_year,
        })
    }

    pub fn researchers(&self) -> &[Researcher] {
        &self.researchers
    }

    pub fn reference_year(&self) -> i32 {
        self.reference_year
    }

    pub fn len(&self) -> usize {
        self.researchers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.researchers.is_empty()
    }

    pub fn publication_count(&self) -> usize {
        self.researchers.iter().map(|r| r.publications.len()).sum()
    }

    pub fn get(&self, researcher_id: &str) -> Option<&Researcher> {
        self.researchers.iter().find(|r| r.researcher_id == researcher_id)
    }

    pub fn into_researchers(self) -> Vec<Researcher> {
        self.researchers
    }

    /// Subset of this corpus; invariants are inherited.
    pub fn retain<F>(&self, mut keep: F) -> Corpus
    where
        F: FnMut(&Researcher) -> bool,
    {
        Corpus {
            researchers: self.researchers.iter().filter(|r| keep(r)).cloned().collect(),
            reference_year: self.reference_year,
        }
    }
}

fn current_year() -> i32 {
    use chrono::Datelike;
    chrono::Utc::now().year()
}

pub(crate) fn infer_reference_year(researchers: &[Researcher]) -> i32 {
    researchers
        .iter()
        .flat_map(|r| &r.publications)
        .map(|p| p.year + p.citation_series.len() as i32 - 1)
        .max()
        .unwrap_or_else(current_year)
}

fn invalid(line: usize, field: &str, reason: String) -> CorpusError {
    CorpusError::Invalid {
        line,
        field: field.to_string(),
        reason,
    }
}

fn validate_researcher(r: &Researcher, line: usize, current_year: i32) -> Result<(), CorpusError> {
    if r.researcher_id.is_empty() {
        return Err(invalid(line, "researcher_id", "empty researcher id".into()));
    }
    let mut ids = HashSet::new();
    for p in &r.publications {
        if p.pub_id.is_empty() {
            return Err(invalid(
                line,
                "pub_id",
                format!("empty pub_id in researcher '{}'", r.researcher_id),
            ));
        }
        if !ids.insert(p.pub_id.as_str()) {
            return Err(CorpusError::DuplicateId {
                line,
                field: "pub_id".into(),
                id: p.pub_id.clone(),
            });
        }
        if !(MIN_PUBLICATION_YEAR..=current_year).contains(&p.year) {
            return Err(invalid(
                line,
                "year",
                format!(
                    "publication '{}' of researcher '{}' has year {} outside [{}, {}]",
                    p.pub_id, r.researcher_id, p.year, MIN_PUBLICATION_YEAR, current_year
                ),
            ));
        }
        if p.citation_series.is_empty() {
            return Err(invalid(
                line,
                "citation_series",
                format!(
                    "empty citation series in publication '{}' of researcher '{}'",
                    p.pub_id, r.researcher_id
                ),
            ));
        }
        if p.citation_series.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid(
                line,
                "citation_series",
                format!(
                    "non-monotone citation series in publication '{}' of researcher '{}'",
                    p.pub_id, r.researcher_id
                ),
            ));
        }
    }
    if let Some(first) = r.first_publication_year() {
        if let Some(&bad) = r.award_years.iter().find(|&&y| y < first) {
            return Err(invalid(
                line,
                "award_years",
                format!(
                    "award year {} of researcher '{}' precedes first publication year {}",
                    bad, r.researcher_id, first
                ),
            ));
        }
    }
    Ok(())
}

/// Cohort selection thresholds. A researcher is retained with at least
/// `min_journal_articles` publications, a field-core share strictly above
/// `min_core_fraction`, and a first-to-last publication span of at least
/// `min_span_years`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EligibilityRule {
    pub min_journal_articles: usize,
    pub min_core_fraction: f64,
    pub min_span_years: i32,
}

impl Default for EligibilityRule {
    fn default() -> Self {
        Self {
            min_journal_articles: 5,
            min_core_fraction: 0.5,
            min_span_years: 5,
        }
    }
}

impl EligibilityRule {
    pub fn new(min_journal_articles: usize, min_core_fraction: f64, min_span_years: i32) -> Result<Self, CorpusError> {
        let rule = Self {
            min_journal_articles,
            min_core_fraction,
            min_span_years,
        };
        rule.validate()?;
        Ok(rule)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.min_journal_articles == 0 {
            return Err(CorpusError::InvalidRule("min_journal_articles must be positive".into()));
        }
        if !(self.min_core_fraction > 0.0 && self.min_core_fraction <= 1.0) {
            return Err(CorpusError::InvalidRule(format!(
                "min_core_fraction must lie in (0, 1], got {}",
                self.min_core_fraction
            )));
        }
        if self.min_span_years <= 0 {
            return Err(CorpusError::InvalidRule("min_span_years must be positive".into()));
        }
        Ok(())
    }

    pub fn accepts(&self, r: &Researcher) -> bool {
        let n = r.publications.len();
        if n < self.min_journal_articles || n == 0 {
            return false;
        }
        let core = r.publications.iter().filter(|p| p.is_field_core).count();
        if core as f64 <= self.min_core_fraction * n as f64 {
            return false;
        }
        match (r.first_publication_year(), r.last_publication_year()) {
            (Some(first), Some(last)) => last - first >= self.min_span_years,
            _ => false,
        }
    }
}

/// Researchers of `corpus` that satisfy `rule`, in their original order.
pub fn filter_eligible(corpus: &Corpus, rule: &EligibilityRule) -> Corpus {
    corpus.retain(|r| rule.accepts(r))
}

/// Mean and sample standard deviation (n - 1 denominator).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanSd {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    /// Set when fewer than two observations exist; `sd` is then 0.
    pub degenerate: bool,
}

impl MeanSd {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self {
                n,
                mean: 0.0,
                sd: 0.0,
                degenerate: true,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        if n == 1 {
            return Self {
                n,
                mean,
                sd: 0.0,
                degenerate: true,
            };
        }
        let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        Self {
            n,
            mean,
            sd: (ss / (n - 1) as f64).sqrt(),
            degenerate: false,
        }
    }
}

impl std::fmt::Display for MeanSd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.2} ± {:.2}", self.mean, self.sd)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusSummary {
    pub researchers: usize,
    pub publications: usize,
    pub academic_age: MeanSd,
    pub publications_per_researcher: MeanSd,
    /// Publications divided by active years (academic age + 1).
    pub publications_per_year: MeanSd,
    pub gender: BTreeMap<Gender, usize>,
    pub continent: BTreeMap<Continent, usize>,
}

/// Cohort description as of the corpus reference year. Researchers without
/// publications count toward the breakdowns but not toward the age and
/// productivity moments.
pub fn descriptive_stats(corpus: &Corpus) -> Result<CorpusSummary, CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::Empty);
    }
    let year = corpus.reference_year();
    let mut ages = Vec::new();
    let mut counts = Vec::new();
    let mut rates = Vec::new();
    let mut gender = BTreeMap::new();
    let mut continent = BTreeMap::new();
    for r in corpus.researchers() {
        *gender.entry(r.gender).or_insert(0) += 1;
        *continent.entry(r.continent).or_insert(0) += 1;
        if let Some(age) = r.academic_age(year) {
            let n = r.publication_count_as_of(year) as f64;
            ages.push(age as f64);
            counts.push(n);
            rates.push(n / (age + 1) as f64);
        }
    }
    Ok(CorpusSummary {
        researchers: corpus.len(),
        publications: corpus.publication_count(),
        academic_age: MeanSd::of(&ages),
        publications_per_researcher: MeanSd::of(&counts),
        publications_per_year: MeanSd::of(&rates),
        gender,
        continent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

impl std::str::FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "json" => Ok(CorpusFormat::Jsonl),
            "csv" => Ok(CorpusFormat::Csv),
            other => Err(format!("unknown corpus format '{other}' (expected jsonl or csv)")),
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn publication(id: &str, year: i32, core: bool, series: &[u64]) -> Publication {
        Publication {
            pub_id: id.into(),
            year,
            is_field_core: core,
            citation_series: series.to_vec(),
        }
    }

    pub fn researcher(id: &str, publications: Vec<Publication>) -> Researcher {
        Researcher {
            researcher_id: id.into(),
            name: format!("Name {id}"),
            gender: Gender::Unknown,
            continent: Continent::OtherUnknown,
            award_years: vec![],
            publications,
        }
    }

    /// `n` publications, the first `core` flagged as field-core, spread evenly
    /// from `first` to `first + span`.
    pub fn shaped(id: &str, n: usize, core: usize, first: i32, span: i32) -> Researcher {
        let pubs = (0..n)
            .map(|i| {
                let year = if n > 1 {
                    first + (span * i as i32) / (n as i32 - 1)
                } else {
                    first
                };
                publication(&format!("{id}-{i}"), year, i < core, &[0])
            })
            .collect();
        researcher(id, pubs)
    }
}
