//! Python bindings: corpus loading and generation, indicators, the
//! statistics toolkit, the parameter sweep and matched comparisons.

use midas_core::corpus::{
    filter_eligible, generate_synthetic, load_corpus, save_corpus, CorpusFormat, EligibilityRule, SyntheticConfig,
};
use midas_core::indicators::{self, AmtParams};
use midas_core::matching::{default_pool, matched_comparison};
use midas_core::{stats, sweep};
use pyo3::exceptions::{PyIOError, PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn corpus_err(e: midas_core::CorpusError) -> PyErr {
    match e {
        midas_core::CorpusError::Io { .. } => PyIOError::new_err(e.to_string()),
        other => value_err(other),
    }
}

fn params(x: u32, y: u32) -> PyResult<AmtParams> {
    AmtParams::new(x, y).map_err(value_err)
}

fn format_of(path: &str, format: Option<&str>) -> PyResult<CorpusFormat> {
    match format {
        Some(f) => f.parse().map_err(value_err),
        None if path.to_ascii_lowercase().ends_with(".csv") => Ok(CorpusFormat::Csv),
        None => Ok(CorpusFormat::Jsonl),
    }
}

/// Serde value to native Python objects via the `json` module.
fn to_python<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A validated set of researchers with a reference year.
#[pyclass(name = "Corpus", module = "midas_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCorpus {
    inner: midas_core::Corpus,
}

#[pymethods]
impl PyCorpus {
    /// Loads JSONL or CSV; the format is inferred from the extension when
    /// not given.
    #[staticmethod]
    #[pyo3(signature = (path, format=None, reference_year=None))]
    fn load(path: &str, format: Option<&str>, reference_year: Option<i32>) -> PyResult<Self> {
        let inner = load_corpus(path, format_of(path, format)?, reference_year).map_err(corpus_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (researchers=100, awardees=0, seed=0, reference_year=2023))]
    fn generate(researchers: usize, awardees: usize, seed: u64, reference_year: i32) -> PyResult<Self> {
        let cfg = SyntheticConfig {
            researchers,
            awardees,
            reference_year,
            ..Default::default()
        };
        let inner = generate_synthetic(&cfg, seed).map_err(corpus_err)?;
        Ok(Self { inner })
    }

    #[pyo3(signature = (path, format=None))]
    fn save(&self, path: &str, format: Option<&str>) -> PyResult<()> {
        save_corpus(&self.inner, path, format_of(path, format)?).map_err(corpus_err)
    }

    #[pyo3(signature = (min_articles=5, min_core_fraction=0.5, min_span=5))]
    fn filter_eligible(&self, min_articles: usize, min_core_fraction: f64, min_span: i32) -> PyResult<Self> {
        let rule = EligibilityRule::new(min_articles, min_core_fraction, min_span).map_err(corpus_err)?;
        Ok(Self {
            inner: filter_eligible(&self.inner, &rule),
        })
    }

    #[getter]
    fn reference_year(&self) -> i32 {
        self.inner.reference_year()
    }

    #[getter]
    fn publication_count(&self) -> usize {
        self.inner.publication_count()
    }

    fn researcher_ids(&self) -> Vec<String> {
        self.inner
            .researchers()
            .iter()
            .map(|r| r.researcher_id.clone())
            .collect()
    }

    fn award_winners(&self) -> Vec<String> {
        self.inner
            .researchers()
            .iter()
            .filter(|r| r.is_award_winner())
            .map(|r| r.researcher_id.clone())
            .collect()
    }

    /// The full record of one researcher as plain dicts and lists.
    fn researcher<'py>(&self, py: Python<'py>, researcher_id: &str) -> PyResult<Bound<'py, PyAny>> {
        let r = self
            .inner
            .get(researcher_id)
            .ok_or_else(|| PyKeyError::new_err(researcher_id.to_string()))?;
        to_python(py, r)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Corpus(researchers={}, publications={}, reference_year={})",
            self.inner.len(),
            self.inner.publication_count(),
            self.inner.reference_year()
        )
    }
}

impl PyCorpus {
    fn researcher_ref(&self, id: &str) -> PyResult<&midas_core::Researcher> {
        self.inner.get(id).ok_or_else(|| PyKeyError::new_err(id.to_string()))
    }
}

#[pyclass(name = "TestResult", module = "midas_py", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
struct PyTestResult {
    method: String,
    statistic: f64,
    p_value: f64,
    n: Vec<usize>,
}

impl From<stats::TestResult> for PyTestResult {
    fn from(r: stats::TestResult) -> Self {
        let method = serde_json::to_value(r.method)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        Self {
            method,
            statistic: r.statistic,
            p_value: r.p_value,
            n: r.n,
        }
    }
}

#[pymethods]
impl PyTestResult {
    fn __repr__(&self) -> String {
        format!(
            "TestResult(method='{}', statistic={}, p_value={}, n={:?})",
            self.method, self.statistic, self.p_value, self.n
        )
    }
}

#[pyclass(name = "PlaneFit", module = "midas_py", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
struct PyPlaneFit {
    intercept: f64,
    coef_x: f64,
    coef_y: f64,
    r_squared: f64,
}

impl From<stats::PlaneFit> for PyPlaneFit {
    fn from(f: stats::PlaneFit) -> Self {
        Self {
            intercept: f.intercept,
            coef_x: f.coef_x,
            coef_y: f.coef_y,
            r_squared: f.r_squared,
        }
    }
}

#[pymethods]
impl PyPlaneFit {
    fn predict(&self, x: f64, y: f64) -> f64 {
        self.intercept + self.coef_x * x + self.coef_y * y
    }

    fn __repr__(&self) -> String {
        stats::PlaneFit {
            intercept: self.intercept,
            coef_x: self.coef_x,
            coef_y: self.coef_y,
            r_squared: self.r_squared,
            degenerate: false,
        }
        .to_string()
    }
}

/// Mean AMT over a grid of `(x, y)` thresholds.
#[pyclass(name = "SweepGrid", module = "midas_py", frozen)]
struct PySweepGrid {
    inner: sweep::SweepGrid,
}

#[pymethods]
impl PySweepGrid {
    #[getter]
    fn x_values(&self) -> Vec<u32> {
        self.inner.x_values.clone()
    }

    #[getter]
    fn y_values(&self) -> Vec<u32> {
        self.inner.y_values.clone()
    }

    /// Row per x value, column per y value.
    #[getter]
    fn cell_means(&self) -> Vec<Vec<f64>> {
        self.inner.cell_means.clone()
    }

    fn fit(&self) -> PyResult<PyPlaneFit> {
        sweep::fit_sweep(&self.inner).map(Into::into).map_err(value_err)
    }

    fn write_csv(&self, path: &str) -> PyResult<()> {
        sweep::emit_heatmap(&self.inner, path).map_err(value_err)
    }
}

#[pyfunction]
#[pyo3(signature = (corpus, researcher_id, x=3, y=15, as_of=None))]
fn amt_score(corpus: &PyCorpus, researcher_id: &str, x: u32, y: u32, as_of: Option<i32>) -> PyResult<f64> {
    let r = corpus.researcher_ref(researcher_id)?;
    let year = as_of.unwrap_or(corpus.inner.reference_year());
    Ok(indicators::amt_score(r, params(x, y)?, year))
}

#[pyfunction]
fn h_index(citation_counts: Vec<u64>) -> usize {
    indicators::h_index(&citation_counts)
}

#[pyfunction]
fn i10_index(citation_counts: Vec<u64>) -> usize {
    indicators::i10_index(&citation_counts)
}

/// One dict per researcher with every indicator.
#[pyfunction]
#[pyo3(signature = (corpus, x=3, y=15, as_of=None))]
fn indicator_reports<'py>(
    py: Python<'py>,
    corpus: &PyCorpus,
    x: u32,
    y: u32,
    as_of: Option<i32>,
) -> PyResult<Bound<'py, PyList>> {
    let p = params(x, y)?;
    let year = as_of.unwrap_or(corpus.inner.reference_year());
    let out = PyList::empty(py);
    for r in corpus.inner.researchers() {
        let rep = indicators::indicator_report(r, p, year);
        let d = PyDict::new(py);
        d.set_item("researcher_id", &rep.researcher_id)?;
        d.set_item("as_of_year", rep.as_of_year)?;
        d.set_item("amt", rep.amt)?;
        d.set_item("h_index", rep.h_index)?;
        d.set_item("i10_index", rep.i10_index)?;
        d.set_item("citation_count", rep.citation_count)?;
        d.set_item("academic_age", rep.academic_age)?;
        d.set_item("eligible_pub_count", rep.eligible_pub_count)?;
        out.append(d)?;
    }
    Ok(out)
}

#[pyfunction]
fn pearson(xs: Vec<f64>, ys: Vec<f64>) -> PyResult<PyTestResult> {
    stats::pearson(&xs, &ys).map(Into::into).map_err(value_err)
}

#[pyfunction]
fn mann_whitney_u(a: Vec<f64>, b: Vec<f64>) -> PyResult<PyTestResult> {
    stats::mann_whitney_u(&a, &b).map(Into::into).map_err(value_err)
}

#[pyfunction]
fn kruskal_wallis(groups: Vec<Vec<f64>>) -> PyResult<PyTestResult> {
    stats::kruskal_wallis(&groups).map(Into::into).map_err(value_err)
}

#[pyfunction]
fn wilcoxon_signed_rank(a: Vec<f64>, b: Vec<f64>) -> PyResult<PyTestResult> {
    if a.len() != b.len() {
        return Err(value_err(stats::StatsError::LengthMismatch(a.len(), b.len())));
    }
    let pairs: Vec<(f64, f64)> = a.into_iter().zip(b).collect();
    stats::wilcoxon_signed_rank(&pairs).map(Into::into).map_err(value_err)
}

#[pyfunction]
fn shapiro_wilk(xs: Vec<f64>) -> PyResult<PyTestResult> {
    stats::shapiro_wilk(&xs).map(Into::into).map_err(value_err)
}

#[pyfunction]
fn bonferroni(p_values: Vec<f64>) -> PyResult<Vec<f64>> {
    stats::bonferroni(&p_values).map_err(value_err)
}

#[pyfunction]
fn normal_cdf(z: f64) -> f64 {
    stats::normal_cdf(z)
}

#[pyfunction]
fn regularized_incomplete_gamma(s: f64, x: f64) -> PyResult<f64> {
    stats::regularized_incomplete_gamma(s, x).map_err(value_err)
}

#[pyfunction]
fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> PyResult<f64> {
    stats::regularized_incomplete_beta(a, b, x).map_err(value_err)
}

/// Least-squares plane through `(x, y, z)` triples.
#[pyfunction]
fn fit_plane(points: Vec<(f64, f64, f64)>) -> PyResult<PyPlaneFit> {
    stats::fit_plane(&points).map(Into::into).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (corpus, x_values=None, y_values=None, as_of=None))]
fn run_sweep(
    corpus: &PyCorpus,
    x_values: Option<Vec<u32>>,
    y_values: Option<Vec<u32>>,
    as_of: Option<i32>,
) -> PyResult<PySweepGrid> {
    let xs = x_values.unwrap_or_else(sweep::SweepGrid::default_x_values);
    let ys = y_values.unwrap_or_else(sweep::SweepGrid::default_y_values);
    let year = as_of.unwrap_or(corpus.inner.reference_year());
    let inner = sweep::run_sweep(&corpus.inner, &xs, &ys, year).map_err(value_err)?;
    Ok(PySweepGrid { inner })
}

/// Matches each treated researcher to a non-award control and compares
/// indicators; returns the report as nested dicts.
#[pyfunction]
#[pyo3(signature = (corpus, treated_ids, x=3, y=15, final_year=None))]
fn compare<'py>(
    py: Python<'py>,
    corpus: &PyCorpus,
    treated_ids: Vec<String>,
    x: u32,
    y: u32,
    final_year: Option<i32>,
) -> PyResult<Bound<'py, PyAny>> {
    let pool = default_pool(&corpus.inner, &treated_ids);
    let year = final_year.unwrap_or(corpus.inner.reference_year());
    let report = matched_comparison(&corpus.inner, &treated_ids, &pool, params(x, y)?, year).map_err(value_err)?;
    to_python(py, &report)
}

#[pymodule]
fn midas_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCorpus>()?;
    m.add_class::<PyTestResult>()?;
    m.add_class::<PyPlaneFit>()?;
    m.add_class::<PySweepGrid>()?;
    m.add_function(wrap_pyfunction!(amt_score, m)?)?;
    m.add_function(wrap_pyfunction!(h_index, m)?)?;
    m.add_function(wrap_pyfunction!(i10_index, m)?)?;
    m.add_function(wrap_pyfunction!(indicator_reports, m)?)?;
    m.add_function(wrap_pyfunction!(pearson, m)?)?;
    m.add_function(wrap_pyfunction!(mann_whitney_u, m)?)?;
    m.add_function(wrap_pyfunction!(kruskal_wallis, m)?)?;
    m.add_function(wrap_pyfunction!(wilcoxon_signed_rank, m)?)?;
    m.add_function(wrap_pyfunction!(shapiro_wilk, m)?)?;
    m.add_function(wrap_pyfunction!(bonferroni, m)?)?;
    m.add_function(wrap_pyfunction!(normal_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(regularized_incomplete_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(regularized_incomplete_beta, m)?)?;
    m.add_function(wrap_pyfunction!(fit_plane, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    Ok(())
}
