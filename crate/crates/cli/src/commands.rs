use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use midas_core::corpus::{
    filter_eligible, generate_synthetic, load_corpus, save_corpus, Corpus, CorpusFormat, Researcher,
};
use midas_core::indicators::{indicator_report, write_reports_csv, IndicatorReport};
use midas_core::matching::{
    default_pool, emit_distribution_data, matched_comparison, write_comparison_csv, ComparisonReport, Indicator,
};
use midas_core::sweep::{emit_heatmap, fit_sweep, normality_check, run_sweep};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

pub const INDICATORS_CSV: &str = "indicators.csv";
pub const INDICATORS_JSON: &str = "indicators.json";
pub const SWEEP_CSV: &str = "sweep.csv";
pub const FIT_JSON: &str = "fit.json";
pub const NORMALITY_JSON: &str = "normality.json";
pub const COMPARISON_CSV: &str = "comparison.csv";
pub const COMPARISON_JSON: &str = "comparison.json";
pub const DISTRIBUTION_CSV: &str = "distribution.csv";
pub const AWARDEES_TXT: &str = "awardees.txt";

fn load(cfg: &RunConfig) -> Result<Corpus, CliError> {
    let path = cfg.corpus_path()?;
    Ok(load_corpus(path, cfg.corpus_format(path), cfg.reference_year)?)
}

fn cohort(cfg: &RunConfig, corpus: &Corpus) -> Corpus {
    match &cfg.eligibility {
        Some(rule) => filter_eligible(corpus, rule),
        None => corpus.clone(),
    }
}

fn output_dir(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let dir = cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| CliError::io(format!("cannot create {}", dir.display()), e))?;
    Ok(dir)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(format!("cannot write {}", path.display()), e))
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Domain(e.to_string()))?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

/// Parses and validates the corpus.
pub fn validate(cfg: &RunConfig) -> Result<String, CliError> {
    let corpus = load(cfg)?;
    Ok(format!(
        "researchers={} publications={}\n",
        corpus.len(),
        corpus.publication_count()
    ))
}

/// Indicator reports for the eligible cohort, ordered by researcher id.
pub fn compute_reports(cfg: &RunConfig, corpus: &Corpus) -> Vec<IndicatorReport> {
    let as_of = cfg.as_of.unwrap_or(corpus.reference_year());
    let cohort = cohort(cfg, corpus);
    let mut researchers: Vec<&Researcher> = cohort.researchers().iter().collect();
    researchers.sort_by(|a, b| a.researcher_id.cmp(&b.researcher_id));
    researchers
        .iter()
        .map(|r| indicator_report(r, cfg.params, as_of))
        .collect()
}

pub fn compute(cfg: &RunConfig) -> Result<String, CliError> {
    let corpus = load(cfg)?;
    let reports = compute_reports(cfg, &corpus);
    let mut csv = Vec::new();
    write_reports_csv(&reports, &mut csv).map_err(|e| CliError::io("cannot format reports", e))?;
    match &cfg.output_dir {
        None => Ok(String::from_utf8(csv).expect("csv output is utf-8")),
        Some(_) => {
            let dir = output_dir(cfg)?;
            write_file(&dir.join(INDICATORS_CSV), &csv)?;
            write_json(&dir.join(INDICATORS_JSON), &reports)?;
            Ok(format!("reports={}\n", reports.len()))
        }
    }
}

pub fn sweep(cfg: &RunConfig) -> Result<String, CliError> {
    let corpus = cohort(cfg, &load(cfg)?);
    let as_of = cfg.as_of.unwrap_or(corpus.reference_year());
    let grid = run_sweep(&corpus, &cfg.grid_x, &cfg.grid_y, as_of)?;
    let fit = fit_sweep(&grid)?;
    let dir = output_dir(cfg)?;
    emit_heatmap(&grid, dir.join(SWEEP_CSV))?;
    write_json(&dir.join(FIT_JSON), &fit)?;

    let mut out = format!("{fit}\n");
    match normality_check(&corpus, cfg.params, cfg.max_n, cfg.seed) {
        Ok(check) => {
            write_json(&dir.join(NORMALITY_JSON), &check)?;
            let _ = writeln!(
                out,
                "shapiro-wilk W={:.4} p={:.4}",
                check.result.statistic, check.result.p_value
            );
        }
        Err(e) => {
            let _ = writeln!(out, "shapiro-wilk skipped: {e}");
        }
    }
    Ok(out)
}

/// Treated ids, one per line; blank lines and `#` comments are skipped.
pub fn read_treated(path: &Path) -> Result<Vec<String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("cannot read {}", path.display()), e))?;
    let ids: Vec<String> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect();
    if ids.is_empty() {
        return Err(CliError::Domain(format!("treated list {} is empty", path.display())));
    }
    Ok(ids)
}

pub fn run_comparison(cfg: &RunConfig, corpus: &Corpus, treated: &[String]) -> Result<ComparisonReport, CliError> {
    for id in treated {
        if corpus.get(id).is_none() {
            return Err(CliError::Domain(format!(
                "treated researcher '{id}' not found in corpus"
            )));
        }
    }
    let cohort = cohort(cfg, corpus);
    let pool = default_pool(&cohort, treated);
    let final_year = cfg.as_of.unwrap_or(corpus.reference_year());
    Ok(matched_comparison(corpus, treated, &pool, cfg.params, final_year)?)
}

pub fn compare(cfg: &RunConfig) -> Result<String, CliError> {
    let corpus = load(cfg)?;
    let path = cfg
        .treated_path
        .as_deref()
        .ok_or_else(|| CliError::Usage("no treated list given (use --treated)".into()))?;
    let treated = read_treated(path)?;
    let report = run_comparison(cfg, &corpus, &treated)?;

    let dir = output_dir(cfg)?;
    let mut csv = Vec::new();
    write_comparison_csv(&report, &mut csv).map_err(|e| CliError::io("cannot format comparison", e))?;
    write_file(&dir.join(COMPARISON_CSV), &csv)?;
    write_json(&dir.join(COMPARISON_JSON), &report)?;
    emit_distribution_data(&report, dir.join(DISTRIBUTION_CSV))?;

    let mut out = String::new();
    for tp in &report.time_points {
        let amt = tp
            .indicators
            .iter()
            .find(|i| i.indicator == Indicator::Amt)
            .expect("amt is always compared");
        let diff = amt
            .relative_difference_percent
            .map_or_else(|| "NA".to_string(), |d| format!("{d:+.2}%"));
        let _ = writeln!(
            out,
            "{} amt: treated={:.4} control={:.4} diff={diff} p={:.4}",
            tp.time_point.label(),
            amt.treated.mean,
            amt.control.mean,
            amt.p_value
        );
    }
    Ok(out)
}

pub fn simulate(cfg: &RunConfig) -> Result<String, CliError> {
    let corpus = generate_synthetic(&cfg.synthetic, cfg.seed)?;
    let dir = output_dir(cfg)?;
    let format = cfg.format.unwrap_or(CorpusFormat::Jsonl);
    let name = match format {
        CorpusFormat::Jsonl => "corpus.jsonl",
        CorpusFormat::Csv => "corpus.csv",
    };
    save_corpus(&corpus, dir.join(name), format)?;
    if cfg.synthetic.awardees > 0 {
        let ids: String = corpus
            .researchers()
            .iter()
            .filter(|r| r.is_award_winner())
            .map(|r| format!("{}\n", r.researcher_id))
            .collect();
        write_file(&dir.join(AWARDEES_TXT), ids.as_bytes())?;
    }
    Ok(format!(
        "researchers={} publications={}\n",
        corpus.len(),
        corpus.publication_count()
    ))
}
