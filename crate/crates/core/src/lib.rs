//! Researcher-level scientometrics built around the AMT indicator: the
//! share of a researcher's publications that collect at least `y` citations
//! within `x` years of appearing.
//!
//! The crate is organised by pipeline stage:
//!
//! - [`corpus`]: data model, JSONL/CSV ingestion, eligibility filtering and a
//!   seeded synthetic corpus generator.
//! - [`indicators`]: AMT, H-index, i10-index and citation counts, each
//!   evaluable as of an arbitrary year.
//! - [`stats`]: special functions, correlation, rank tests, Shapiro-Wilk,
//!   Bonferroni correction and least-squares plane fitting.
//! - [`sweep`]: the `(x, y)` sensitivity grid, its plane fit and a
//!   normality check of the AMT distribution.
//! - [`matching`]: age/productivity matched controls and the award-vs-control
//!   comparison report.

pub mod corpus;
pub mod indicators;
pub mod matching;
pub mod stats;
pub mod sweep;

pub use corpus::{
    Continent, Corpus, CorpusError, CorpusFormat, EligibilityRule, Gender, Publication, Researcher, SyntheticConfig,
};
pub use indicators::{AmtParams, IndicatorReport};
pub use matching::{ComparisonReport, MatchedPair};
pub use stats::{PlaneFit, StatsError, TestMethod, TestResult};
pub use sweep::SweepGrid;
