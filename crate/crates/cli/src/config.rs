//! Flat `key = value` run configuration with command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use midas_core::corpus::{CorpusFormat, EligibilityRule, SyntheticConfig};
use midas_core::indicators::AmtParams;
use midas_core::sweep::{SweepGrid, DEFAULT_NORMALITY_MAX_N};

use crate::error::CliError;
use crate::grid::parse_grid;

pub const KEYS: &[&str] = &[
    "corpus",
    "format",
    "out",
    "seed",
    "as_of",
    "x",
    "y",
    "reference_year",
    "min_articles",
    "min_core_fraction",
    "min_span",
    "no_filter",
    "grid_x",
    "grid_y",
    "max_n",
    "treated",
    "researchers",
    "awardees",
    "career_start_min",
    "career_start_max",
    "publications_per_year",
    "core_probability",
    "high_impact_share",
    "awardee_high_impact_share",
    "ordinary_rate",
    "high_impact_rate",
];

const PATH_KEYS: &[&str] = &["corpus", "out", "treated"];

/// Raw settings: config-file values overlaid by flags.
#[derive(Debug, Default, Clone)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Parses a config file. Blank lines and `#` comments are ignored;
    /// relative paths are taken relative to the file's directory.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "{}:{}: unknown key '{key}'",
                    path.display(),
                    i + 1
                )));
            }
            let mut value = value.trim().to_string();
            if PATH_KEYS.contains(&key.as_str()) && Path::new(&value).is_relative() {
                value = base.join(&value).to_string_lossy().into_owned();
            }
            values.insert(key, value);
        }
        Ok(Self { values })
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        debug_assert!(KEYS.contains(&key), "{key}");
        self.values.insert(key.to_string(), value.to_string());
    }

    pub fn set_opt<T: ToString>(&mut self, key: &str, value: Option<T>) {
        if let Some(v) = value {
            self.set(key, v);
        }
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| CliError::Usage(format!("invalid value '{v}' for {key}: {e}")))
            })
            .transpose()
    }

    fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.get(key) {
            None => Ok(false),
            Some("true" | "1" | "yes") => Ok(true),
            Some("false" | "0" | "no") => Ok(false),
            Some(v) => Err(CliError::Usage(format!("invalid boolean '{v}' for {key}"))),
        }
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub corpus_path: Option<PathBuf>,
    pub format: Option<CorpusFormat>,
    pub params: AmtParams,
    pub reference_year: Option<i32>,
    pub as_of: Option<i32>,
    /// `None` disables cohort filtering.
    pub eligibility: Option<EligibilityRule>,
    pub grid_x: Vec<u32>,
    pub grid_y: Vec<u32>,
    pub max_n: usize,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    pub treated_path: Option<PathBuf>,
    pub synthetic: SyntheticConfig,
}

impl RunConfig {
    pub fn resolve(s: &Settings) -> Result<Self, CliError> {
        let x = s.parsed("x")?.unwrap_or(3);
        let y = s.parsed("y")?.unwrap_or(15);
        let params = AmtParams::new(x, y).map_err(|e| CliError::Usage(e.to_string()))?;

        let eligibility = if s.flag("no_filter")? {
            None
        } else {
            let d = EligibilityRule::default();
            let rule = EligibilityRule::new(
                s.parsed("min_articles")?.unwrap_or(d.min_journal_articles),
                s.parsed("min_core_fraction")?.unwrap_or(d.min_core_fraction),
                s.parsed("min_span")?.unwrap_or(d.min_span_years),
            )
            .map_err(|e| CliError::Usage(e.to_string()))?;
            Some(rule)
        };

        let grid = |key: &str, default: Vec<u32>| match s.get(key) {
            Some(spec) => parse_grid(spec).map_err(|e| CliError::Usage(format!("{key}: {e}"))),
            None => Ok(default),
        };

        let d = SyntheticConfig::default();
        let reference_year = s.parsed("reference_year")?;
        let synthetic = SyntheticConfig {
            researchers: s.parsed("researchers")?.unwrap_or(d.researchers),
            awardees: s.parsed("awardees")?.unwrap_or(d.awardees),
            reference_year: reference_year.unwrap_or(d.reference_year),
            career_start_min: s.parsed("career_start_min")?.unwrap_or(d.career_start_min),
            career_start_max: s.parsed("career_start_max")?.unwrap_or(d.career_start_max),
            publications_per_year: s.parsed("publications_per_year")?.unwrap_or(d.publications_per_year),
            core_probability: s.parsed("core_probability")?.unwrap_or(d.core_probability),
            high_impact_share: s.parsed("high_impact_share")?.unwrap_or(d.high_impact_share),
            awardee_high_impact_share: s
                .parsed("awardee_high_impact_share")?
                .unwrap_or(d.awardee_high_impact_share),
            ordinary_rate: s.parsed("ordinary_rate")?.unwrap_or(d.ordinary_rate),
            high_impact_rate: s.parsed("high_impact_rate")?.unwrap_or(d.high_impact_rate),
        };

        Ok(Self {
            corpus_path: s.get("corpus").map(PathBuf::from),
            format: s.parsed::<CorpusFormat>("format")?,
            params,
            reference_year,
            as_of: s.parsed("as_of")?,
            eligibility,
            grid_x: grid("grid_x", SweepGrid::default_x_values())?,
            grid_y: grid("grid_y", SweepGrid::default_y_values())?,
            max_n: s.parsed("max_n")?.unwrap_or(DEFAULT_NORMALITY_MAX_N),
            seed: s.parsed("seed")?.unwrap_or(0),
            output_dir: s.get("out").map(PathBuf::from),
            treated_path: s.get("treated").map(PathBuf::from),
            synthetic,
        })
    }

    pub fn corpus_path(&self) -> Result<&Path, CliError> {
        self.corpus_path
            .as_deref()
            .ok_or_else(|| CliError::Usage("no corpus given (use --corpus or corpus = ...)".into()))
    }

    /// Explicit format, else inferred from the file extension.
    pub fn corpus_format(&self, path: &Path) -> CorpusFormat {
        self.format
            .unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
                Some(ext) if ext.eq_ignore_ascii_case("csv") => CorpusFormat::Csv,
                _ => CorpusFormat::Jsonl,
            })
    }
}
