//! Python bindings: `import molprompt`.

use std::collections::HashSet;

use molprompt::augmentation::f1_score as core_f1;
use molprompt::dataset::{build_pairs, parse_library, BuildConfig, Library, Style, StyleWeights, SubsetPolicy};
use molprompt::descriptors::compute_descriptors;
use molprompt::evaluation::{self, ConstraintSpec, EvalOptions, UniquenessDenominator};
use molprompt::fingerprints::{morgan_fingerprint, tanimoto as core_tanimoto};
use molprompt::generators::{sample, train_ngram, NGramModel as CoreNGram};
use molprompt::teachers::{iupac_fragments as core_iupac_fragments, Fact, Lexicon, TeacherSet};
use molprompt::{canonicalize as core_canonicalize, parse_smiles, CanonicalSmiles, MolGraph};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mol(smiles: &str) -> PyResult<MolGraph> {
    parse_smiles(smiles).map_err(value_err)
}

fn from_json(py: Python<'_>, text: &str) -> PyResult<PyObject> {
    Ok(py.import_bound("json")?.call_method1("loads", (text,))?.unbind())
}

fn to_json(py: Python<'_>, obj: &Bound<'_, PyAny>) -> PyResult<String> {
    py.import_bound("json")?.call_method1("dumps", (obj,))?.extract()
}

fn default_teachers() -> TeacherSet {
    TeacherSet::with_lexicon(Lexicon::bundled())
}

#[pyfunction]
fn canonicalize(smiles: &str) -> PyResult<String> {
    Ok(core_canonicalize(&mol(smiles)?).as_str().to_string())
}

#[pyfunction]
fn is_valid(smiles: &str) -> bool {
    molprompt::is_valid(smiles)
}

/// Canonical form plus the descriptor set, as a dict.
#[pyfunction]
fn describe<'py>(py: Python<'py>, smiles: &str) -> PyResult<Bound<'py, PyDict>> {
    let m = mol(smiles)?;
    let d = compute_descriptors(&m).map_err(value_err)?;
    let out = PyDict::new_bound(py);
    out.set_item("canonical", core_canonicalize(&m).as_str())?;
    out.set_item("mw", d.mw)?;
    out.set_item("logp", d.logp)?;
    out.set_item("qed", d.qed)?;
    out.set_item("sa", d.sa)?;
    out.set_item("hba", d.hba)?;
    out.set_item("hbd", d.hbd)?;
    out.set_item("tpsa", d.tpsa)?;
    out.set_item("arom_rings", d.arom_rings)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (a, b, radius = 2, nbits = 2048))]
fn tanimoto(a: &str, b: &str, radius: u32, nbits: u32) -> PyResult<f64> {
    let fa = morgan_fingerprint(&mol(a)?, radius, nbits).map_err(value_err)?;
    let fb = morgan_fingerprint(&mol(b)?, radius, nbits).map_err(value_err)?;
    core_tanimoto(&fa, &fb).map_err(value_err)
}

#[pyfunction]
fn iupac_fragments(name: &str) -> Vec<String> {
    core_iupac_fragments(name)
}

#[pyfunction]
fn task_ids() -> Vec<&'static str> {
    molprompt::dataset::task_ids()
}

/// Render a template from a list of fact dicts, e.g.
/// `{"kind": "FG", "name": "benzamide", "source": "lexicon"}`.
#[pyfunction]
#[pyo3(signature = (task, facts, style = "T0"))]
fn render_template(py: Python<'_>, task: &str, facts: &Bound<'_, PyAny>, style: &str) -> PyResult<String> {
    let style: Style = style.parse().map_err(value_err)?;
    let facts: Vec<Fact> = serde_json::from_str(&to_json(py, facts)?).map_err(value_err)?;
    molprompt::dataset::render_template(task, style, &facts).map_err(value_err)
}

/// `(task, style)` of the template a prompt was rendered from, or None.
#[pyfunction]
fn match_prompt(prompt: &str) -> Option<(&'static str, String)> {
    molprompt::dataset::match_prompt(prompt).map(|(t, s)| (t, s.to_string()))
}

#[pyfunction]
fn validity_ratio(samples: Vec<String>) -> f64 {
    evaluation::validity_ratio(&samples)
}

#[pyfunction]
#[pyo3(signature = (samples, over_all = false))]
fn uniqueness_ratio(samples: Vec<String>, over_all: bool) -> f64 {
    let d = if over_all {
        UniquenessDenominator::All
    } else {
        UniquenessDenominator::Valid
    };
    evaluation::uniqueness_ratio_with(&samples, d)
}

fn canonical_set(smiles: &[String]) -> HashSet<CanonicalSmiles> {
    smiles
        .iter()
        .filter_map(|s| parse_smiles(s).ok())
        .map(|m| core_canonicalize(&m))
        .collect()
}

#[pyfunction]
fn novelty_ratio(samples: Vec<String>, training: Vec<String>) -> f64 {
    evaluation::novelty_ratio(&samples, &canonical_set(&training))
}

#[pyfunction]
fn diversity_score(samples: Vec<String>) -> PyResult<f64> {
    evaluation::diversity_score(&samples).map_err(value_err)
}

#[pyfunction]
fn f1_score(predictions: Vec<bool>, labels: Vec<bool>) -> PyResult<f64> {
    core_f1(&predictions, &labels).map_err(value_err)
}

/// Five-metric report for a batch against a spec such as `FG:benzamide+QED`,
/// scored with the bundled lexicon.
#[pyfunction]
fn evaluate(py: Python<'_>, samples: Vec<String>, spec: &str, training: Vec<String>) -> PyResult<PyObject> {
    let spec = ConstraintSpec::parse(spec).map_err(value_err)?;
    let report = evaluation::evaluate(
        &samples,
        &spec,
        &canonical_set(&training),
        &default_teachers(),
        &EvalOptions::default(),
    )
    .map_err(value_err)?;
    from_json(py, &serde_json::to_string(&report).map_err(value_err)?)
}

/// A canonicalized, deduplicated molecule library.
#[pyclass(name = "Library")]
struct PyLibrary {
    inner: Library,
}

#[pymethods]
impl PyLibrary {
    /// The bundled 10k-molecule sample library.
    #[staticmethod]
    fn bundled() -> Self {
        PyLibrary {
            inner: Library::bundled(),
        }
    }

    /// Parse `SMILES[<TAB>IUPAC]` lines.
    #[staticmethod]
    fn parse(text: &str) -> Self {
        PyLibrary {
            inner: parse_library(text),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn smiles(&self) -> Vec<String> {
        self.inner.entries.iter().map(|e| e.smiles.as_str().to_string()).collect()
    }

    /// Text/molecule pairs as a list of dicts.
    #[pyo3(signature = (seed = 0, min_facts = 1, max_facts = 2, samples_per_molecule = 4, tasks = None, style = None))]
    fn build_dataset(
        &self,
        py: Python<'_>,
        seed: u64,
        min_facts: usize,
        max_facts: usize,
        samples_per_molecule: usize,
        tasks: Option<Vec<String>>,
        style: Option<&str>,
    ) -> PyResult<PyObject> {
        let styles = match style {
            Some(s) => StyleWeights::only(s.parse().map_err(value_err)?),
            None => StyleWeights::default(),
        };
        let config = BuildConfig {
            policy: SubsetPolicy {
                min_facts,
                max_facts,
                samples_per_molecule,
                seed,
            },
            tasks,
            styles,
        };
        let ds = py
            .allow_threads(|| build_pairs(&self.inner, &default_teachers(), &config))
            .map_err(value_err)?;
        from_json(py, &serde_json::to_string(&ds.pairs).map_err(value_err)?)
    }
}

/// Task-conditioned n-gram generator with valence masking.
#[pyclass(name = "NGramModel")]
struct PyNGramModel {
    inner: CoreNGram,
}

#[pymethods]
impl PyNGramModel {
    /// Train on a list of pair dicts as returned by `Library.build_dataset`.
    #[staticmethod]
    #[pyo3(signature = (pairs, order = 4))]
    fn train(py: Python<'_>, pairs: &Bound<'_, PyAny>, order: usize) -> PyResult<Self> {
        let pairs: Vec<molprompt::dataset::TextMoleculePair> =
            serde_json::from_str(&to_json(py, pairs)?).map_err(value_err)?;
        let inner = py.allow_threads(|| train_ngram(&pairs, order)).map_err(value_err)?;
        Ok(PyNGramModel { inner })
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        Ok(PyNGramModel {
            inner: CoreNGram::from_bytes(data).map_err(value_err)?,
        })
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new_bound(py, &self.inner.to_bytes())
    }

    fn tasks(&self) -> Vec<String> {
        self.inner.tasks().map(str::to_string).collect()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order
    }

    #[pyo3(signature = (task, n = 5000, seed = 0))]
    fn sample(&self, py: Python<'_>, task: &str, n: usize, seed: u64) -> PyResult<Vec<String>> {
        py.allow_threads(|| sample(&self.inner, task, n, seed)).map_err(value_err)
    }
}

#[pymodule]
#[pyo3(name = "molprompt")]
fn molprompt_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(canonicalize, m)?)?;
    m.add_function(wrap_pyfunction!(is_valid, m)?)?;
    m.add_function(wrap_pyfunction!(describe, m)?)?;
    m.add_function(wrap_pyfunction!(tanimoto, m)?)?;
    m.add_function(wrap_pyfunction!(iupac_fragments, m)?)?;
    m.add_function(wrap_pyfunction!(task_ids, m)?)?;
    m.add_function(wrap_pyfunction!(render_template, m)?)?;
    m.add_function(wrap_pyfunction!(match_prompt, m)?)?;
    m.add_function(wrap_pyfunction!(validity_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(uniqueness_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(novelty_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(diversity_score, m)?)?;
    m.add_function(wrap_pyfunction!(f1_score, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_class::<PyLibrary>()?;
    m.add_class::<PyNGramModel>()?;
    Ok(())
}
