//! Python bindings: parse exports, build quasi-JCR matrices and
//! environments, map them as cosine networks and lay them out.

use citemap_core::export::render_pajek;
use citemap_core::layout::{kamada_kawai as core_kamada_kawai, LayoutResult};
use citemap_core::matrix::{
    build_quasi_jcr as core_build_quasi_jcr, cited_environment as core_cited_environment,
    citing_environment as core_citing_environment, min_count_for_inclusion as core_min_count,
};
use citemap_core::network::{
    cosine_network as core_cosine_network, cosine_threshold_filter,
    factor_solution as core_factor_solution, k_core as core_k_core, largest_component,
    FactorOptions,
};
use citemap_core::registry::make_match_key;
use citemap_core::stats::{self, RowPolicy};
use citemap_core::wos::{parse_export_str, write_records, ParseError, ParseOptions};
use citemap_core::{
    AnalysisParams, CitationEnvironment, CitationMatrix, DocumentRecord, FactorSolution,
    SimilarityNetwork, SourceList,
};
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn params(contribution: f64, cosine_threshold: f64, seed: u64) -> PyResult<AnalysisParams> {
    let p = AnalysisParams {
        contribution_fraction: contribution,
        cosine_cutoff: cosine_threshold,
        rng_seed: seed,
        ..Default::default()
    };
    p.validate().map_err(value_error)?;
    Ok(p)
}

/// Parsed bibliographic records.
#[pyclass(module = "citemap", name = "Records", frozen)]
struct Records {
    inner: Vec<DocumentRecord>,
    truncated: bool,
}

#[pymethods]
impl Records {
    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn truncated(&self) -> bool {
        self.truncated
    }

    fn accession_ids(&self) -> Vec<String> {
        self.inner.iter().map(|r| r.accession_id.clone()).collect()
    }

    fn years(&self) -> Vec<Option<i32>> {
        self.inner.iter().map(|r| r.pub_year).collect()
    }

    fn source_abbrevs(&self) -> Vec<String> {
        self.inner.iter().map(|r| r.source_abbrev.clone()).collect()
    }

    fn reference_counts(&self) -> Vec<u64> {
        self.inner.iter().map(stats::reference_count).collect()
    }

    /// Field-tagged text of all records.
    fn to_export(&self) -> String {
        write_records(&self.inner)
    }
}

#[pyfunction]
#[pyo3(signature = (text, allow_truncated = false))]
fn parse_export(text: &str, allow_truncated: bool) -> PyResult<Records> {
    match parse_export_str(text, &ParseOptions::default()) {
        Ok(p) => Ok(Records {
            inner: p.records,
            truncated: false,
        }),
        Err(ParseError::Truncated { partial }) if allow_truncated => Ok(Records {
            inner: partial.records,
            truncated: true,
        }),
        Err(e) => Err(value_error(e)),
    }
}

#[pyclass(module = "citemap", name = "SourceList", frozen)]
struct PySourceList {
    inner: SourceList,
}

#[pymethods]
impl PySourceList {
    #[new]
    #[pyo3(signature = (abbrevs, name = "sources"))]
    fn new(abbrevs: Vec<String>, name: &str) -> PyResult<Self> {
        let (inner, _) = SourceList::from_abbrevs(name, &abbrevs).map_err(value_error)?;
        Ok(PySourceList { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn keys(&self) -> Vec<String> {
        self.inner.members().map(|m| m.key.key.clone()).collect()
    }

    #[pyo3(signature = (abbrev, fuzzy = true))]
    fn lookup(&self, abbrev: &str, fuzzy: bool) -> Option<String> {
        self.inner.lookup(abbrev, fuzzy).map(|m| m.key.key.clone())
    }
}

#[pyfunction]
fn match_key(abbrev: &str) -> PyResult<String> {
    make_match_key(abbrev).map(|k| k.key).map_err(value_error)
}

/// Journal-by-journal citation counts.
#[pyclass(module = "citemap", name = "CitationMatrix", frozen)]
struct PyMatrix {
    inner: CitationMatrix,
}

#[pymethods]
impl PyMatrix {
    #[getter]
    fn total_relations(&self) -> u64 {
        self.inner.total_relations
    }

    #[getter]
    fn unique_pairs(&self) -> u64 {
        self.inner.unique_pairs
    }

    fn journals(&self) -> Vec<String> {
        self.inner.journals()
    }

    fn get(&self, citing: &str, cited: &str) -> u64 {
        self.inner.get(citing, cited)
    }

    fn cells(&self) -> Vec<(String, String, u64)> {
        self.inner
            .cells
            .iter()
            .map(|((a, b), &c)| (a.clone(), b.clone(), c))
            .collect()
    }
}

#[pyfunction]
#[pyo3(signature = (records, sources, fuzzy = true))]
fn build_quasi_jcr(
    records: PyRef<'_, Records>,
    sources: PyRef<'_, PySourceList>,
    fuzzy: bool,
) -> PyMatrix {
    PyMatrix {
        inner: core_build_quasi_jcr(&records.inner, &sources.inner, fuzzy),
    }
}

#[pyclass(module = "citemap", name = "CitationEnvironment", frozen)]
struct PyEnvironment {
    inner: CitationEnvironment,
}

#[pymethods]
impl PyEnvironment {
    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn journals(&self) -> Vec<String> {
        self.inner.journals.clone()
    }

    #[getter]
    fn totals(&self) -> Vec<u64> {
        self.inner.totals.clone()
    }

    #[getter]
    fn min_count(&self) -> u64 {
        self.inner.min_count
    }

    #[getter]
    fn environment_total(&self) -> u64 {
        self.inner.environment_total
    }
}

#[pyfunction]
#[pyo3(signature = (matrix, seed, contribution = 0.01))]
fn cited_environment(
    matrix: PyRef<'_, PyMatrix>,
    seed: &str,
    contribution: f64,
) -> PyResult<PyEnvironment> {
    let p = params(contribution, 0.0, 1)?;
    let inner = core_cited_environment(&matrix.inner, seed, &p)
        .map_err(|e| PyKeyError::new_err(e.to_string()))?;
    Ok(PyEnvironment { inner })
}

#[pyfunction]
#[pyo3(signature = (matrix, seed, contribution = 0.01))]
fn citing_environment(
    matrix: PyRef<'_, PyMatrix>,
    seed: &str,
    contribution: f64,
) -> PyResult<PyEnvironment> {
    let p = params(contribution, 0.0, 1)?;
    let inner = core_citing_environment(&matrix.inner, seed, &p)
        .map_err(|e| PyKeyError::new_err(e.to_string()))?;
    Ok(PyEnvironment { inner })
}

#[pyfunction]
fn min_count_for_inclusion(total: u64, fraction: f64) -> u64 {
    core_min_count(total, fraction)
}

#[pyclass(module = "citemap", name = "Network", frozen)]
struct PyNetwork {
    inner: SimilarityNetwork,
}

#[pymethods]
impl PyNetwork {
    #[getter]
    fn journals(&self) -> Vec<String> {
        self.inner.nodes.iter().map(|n| n.journal.clone()).collect()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.nodes.iter().map(|n| n.label.clone()).collect()
    }

    /// `(a, b, cosine)` with node indices.
    #[getter]
    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner
            .edges
            .iter()
            .map(|e| (e.a, e.b, e.weight))
            .collect()
    }

    fn largest_component(&self) -> PyNetwork {
        PyNetwork {
            inner: largest_component(&self.inner).0,
        }
    }
}

#[pyfunction]
#[pyo3(signature = (env, cosine_threshold = 0.0))]
fn cosine_network(env: PyRef<'_, PyEnvironment>, cosine_threshold: f64) -> PyResult<PyNetwork> {
    let p = params(env.inner.params.contribution_fraction, cosine_threshold, 1)?;
    Ok(PyNetwork {
        inner: cosine_threshold_filter(&core_cosine_network(&env.inner, &p), cosine_threshold),
    })
}

#[pyfunction]
fn k_core(net: PyRef<'_, PyNetwork>) -> Vec<u32> {
    core_k_core(&net.inner)
}

#[pyclass(module = "citemap", name = "FactorSolution", frozen)]
struct PyFactors {
    inner: FactorSolution,
}

#[pymethods]
impl PyFactors {
    #[getter]
    fn journals(&self) -> Vec<String> {
        self.inner.journals.clone()
    }

    #[getter]
    fn loadings(&self) -> Vec<Vec<f64>> {
        self.inner.loadings.clone()
    }

    #[getter]
    fn explained_variance(&self) -> Vec<f64> {
        self.inner.explained_variance.clone()
    }

    #[getter]
    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues.clone()
    }

    /// Journal -> factor index.
    #[getter]
    fn assignment(&self) -> std::collections::BTreeMap<String, usize> {
        self.inner.assignment.clone()
    }
}

#[pyfunction]
#[pyo3(signature = (env, k, rotate = true, exclude_seed = false))]
fn factor_solution(
    env: PyRef<'_, PyEnvironment>,
    k: usize,
    rotate: bool,
    exclude_seed: bool,
) -> PyResult<PyFactors> {
    core_factor_solution(&env.inner, k, rotate, FactorOptions { exclude_seed })
        .map(|inner| PyFactors { inner })
        .map_err(value_error)
}

#[pyclass(module = "citemap", name = "Layout", frozen)]
struct PyLayout {
    inner: LayoutResult,
}

#[pymethods]
impl PyLayout {
    #[getter]
    fn positions(&self) -> Vec<(f64, f64)> {
        self.inner.positions.iter().map(|p| (p[0], p[1])).collect()
    }

    #[getter]
    fn initial_stress(&self) -> f64 {
        self.inner.initial_stress
    }

    #[getter]
    fn final_stress(&self) -> f64 {
        self.inner.final_stress
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged
    }

    #[getter]
    fn trace(&self) -> Vec<f64> {
        self.inner.trace.clone()
    }
}

#[pyfunction]
#[pyo3(signature = (net, seed = 1))]
fn kamada_kawai(net: PyRef<'_, PyNetwork>, seed: u64) -> PyLayout {
    let p = AnalysisParams {
        rng_seed: seed,
        ..Default::default()
    };
    PyLayout {
        inner: core_kamada_kawai(&net.inner, &p),
    }
}

#[pyfunction]
fn pajek(net: PyRef<'_, PyNetwork>, layout: PyRef<'_, PyLayout>) -> PyResult<String> {
    render_pajek(&net.inner, &layout.inner).map_err(value_error)
}

/// `(label, count, percent)` rows.
#[pyfunction]
fn doc_type_distribution(records: PyRef<'_, Records>) -> Vec<(String, u64, f64)> {
    rows(stats::doc_type_distribution(&records.inner))
}

#[pyfunction]
fn language_distribution(records: PyRef<'_, Records>) -> Vec<(String, u64, f64)> {
    rows(stats::language_distribution(&records.inner))
}

fn rows(d: stats::Distribution) -> Vec<(String, u64, f64)> {
    d.labels
        .into_iter()
        .zip(d.counts)
        .zip(d.percents)
        .map(|((l, c), p)| (l, c, p))
        .collect()
}

/// `(rho, t, p_value, n)`; `shared_nonzero` drops rows that are zero in either column.
#[pyfunction]
#[pyo3(signature = (x, y, shared_nonzero = false))]
fn spearman(x: Vec<u64>, y: Vec<u64>, shared_nonzero: bool) -> PyResult<(f64, f64, f64, usize)> {
    let policy = if shared_nonzero {
        RowPolicy::SharedNonzero
    } else {
        RowPolicy::AllRows
    };
    let s = stats::spearman_counts(&x, &y, policy).map_err(value_error)?;
    Ok((s.rho, s.t, s.p_value, s.n))
}

#[pyfunction]
fn never_cited_share(items: u64, cited_items: u64) -> PyResult<f64> {
    stats::never_cited_share(items, cited_items).map_err(value_error)
}

#[pymodule]
fn citemap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Records>()?;
    m.add_class::<PySourceList>()?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyEnvironment>()?;
    m.add_class::<PyNetwork>()?;
    m.add_class::<PyFactors>()?;
    m.add_class::<PyLayout>()?;
    m.add_function(wrap_pyfunction!(parse_export, m)?)?;
    m.add_function(wrap_pyfunction!(match_key, m)?)?;
    m.add_function(wrap_pyfunction!(build_quasi_jcr, m)?)?;
    m.add_function(wrap_pyfunction!(cited_environment, m)?)?;
    m.add_function(wrap_pyfunction!(citing_environment, m)?)?;
    m.add_function(wrap_pyfunction!(min_count_for_inclusion, m)?)?;
    m.add_function(wrap_pyfunction!(cosine_network, m)?)?;
    m.add_function(wrap_pyfunction!(k_core, m)?)?;
    m.add_function(wrap_pyfunction!(factor_solution, m)?)?;
    m.add_function(wrap_pyfunction!(kamada_kawai, m)?)?;
    m.add_function(wrap_pyfunction!(pajek, m)?)?;
    m.add_function(wrap_pyfunction!(doc_type_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(language_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(spearman, m)?)?;
    m.add_function(wrap_pyfunction!(never_cited_share, m)?)?;
    Ok(())
}
