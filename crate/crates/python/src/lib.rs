//! Python bindings. Structured arguments (languages, classes, schedules,
//! distributions, level parameters) are accepted either as JSON text or as
//! plain Python dicts/lists in the same shape the CLI config uses; results
//! come back as dicts.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyString;
use serde::de::DeserializeOwned;
use serde::Serialize;

use learnlab::arena::{self, LevelEnv, Schedule};
use learnlab::mechanisms::{Generator, GeneratorStrategy, Hypothesis, LearnerKind};
use learnlab::risk::{self, Distribution};
use learnlab::suite::{self, SuiteConfig};
use learnlab::universe::{ConceptClass, Index, Instance, LanguageSpec};
use learnlab::vcdim::{self, ClassShape, HypothesisClass};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn from_py<T: DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = if let Ok(s) = obj.cast::<PyString>() {
        s.to_str()?.to_owned()
    } else {
        obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?
    };
    serde_json::from_str(&text).map_err(err)
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn index_from(i: u128) -> Index {
    Index::from(i)
}

/// A decidable language over the naturals.
#[pyclass(name = "Language", frozen)]
struct PyLanguage(LanguageSpec);

#[pymethods]
impl PyLanguage {
    #[new]
    fn new(spec: &Bound<'_, PyAny>) -> PyResult<Self> {
        from_py(spec).map(PyLanguage)
    }

    fn contains(&self, x: Instance) -> bool {
        self.0.contains(x)
    }

    fn __contains__(&self, x: Instance) -> bool {
        self.0.contains(x)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0)
    }

    fn __repr__(&self) -> String {
        self.0.to_string()
    }
}

/// An indexed concept class: thresholds, multiples, cofinite, superfinite
/// or regular_small.
#[pyclass(name = "ConceptClass", frozen)]
struct PyConceptClass(ConceptClass);

#[pymethods]
impl PyConceptClass {
    #[new]
    fn new(spec: &Bound<'_, PyAny>) -> PyResult<Self> {
        if let Ok(s) = spec.cast::<PyString>() {
            let s = s.to_str()?;
            if !s.trim_start().starts_with('{') {
                return serde_json::from_value(serde_json::json!({ "kind": s })).map(PyConceptClass).map_err(err);
            }
        }
        from_py(spec).map(PyConceptClass)
    }

    fn language(&self, i: u128) -> PyResult<PyLanguage> {
        self.0.language(&index_from(i)).map(PyLanguage).map_err(err)
    }

    fn index_of(&self, lang: &PyLanguage) -> Option<String> {
        self.0.index_of(&lang.0).map(|i| i.to_string())
    }

    fn member(&self, i: u128, x: Instance) -> PyResult<bool> {
        self.0.member(&index_from(i), x).map_err(err)
    }

    fn __repr__(&self) -> String {
        self.0.to_string()
    }
}

fn schedule_or_fair(schedule: Option<&Bound<'_, PyAny>>) -> PyResult<Schedule> {
    schedule.map(from_py).transpose().map(|s| s.unwrap_or(Schedule::Fair))
}

#[pyfunction]
#[pyo3(signature = (shape, universe, cap))]
fn vc_dimension<'py>(
    py: Python<'py>,
    shape: &Bound<'py, PyAny>,
    universe: Vec<Instance>,
    cap: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let shape: ClassShape = from_py(shape)?;
    let hc = HypothesisClass::new(shape, universe.iter().copied()).map_err(err)?;
    let r = vcdim::vc_dimension(&hc, &universe, cap).map_err(err)?;
    to_py(py, &serde_json::json!({"vc": r.vc, "exact": r.exact, "cap": r.cap, "universe_size": r.universe_size}))
}

#[pyfunction]
#[pyo3(signature = (d, eps, delta, c = 4.0))]
fn sample_bound(d: u32, eps: f64, delta: f64, c: f64) -> PyResult<u64> {
    vcdim::sample_bound(d, eps, delta, c).map_err(err)
}

#[pyfunction]
fn risk_expr(hypothesis: &PyLanguage, target: &PyLanguage, universe: Vec<Instance>) -> PyResult<f64> {
    risk::risk_expr(&Hypothesis::new(hypothesis.0.clone()), &target.0, &universe).map(|r| r.value).map_err(err)
}

#[pyfunction]
fn risk_pac_exact(hypothesis: &PyLanguage, target: &PyLanguage, distribution: &Bound<'_, PyAny>) -> PyResult<f64> {
    let d: Distribution = from_py(distribution)?;
    Ok(risk::risk_pac_exact(&Hypothesis::new(hypothesis.0.clone()), &target.0, &d).value)
}

/// Monte Carlo risk; returns `(estimate, ci_halfwidth)`.
#[pyfunction]
fn risk_pac_mc(
    hypothesis: &PyLanguage,
    target: &PyLanguage,
    distribution: &Bound<'_, PyAny>,
    m: u64,
    seed: u64,
) -> PyResult<(f64, f64)> {
    let d: Distribution = from_py(distribution)?;
    let r = risk::risk_pac_mc(&Hypothesis::new(hypothesis.0.clone()), &target.0, &d, m, seed).map_err(err)?;
    Ok((r.value, r.ci_halfwidth.unwrap_or(0.0)))
}

/// Identification run; returns the trace summary dict.
#[pyfunction]
#[pyo3(signature = (class_, target, learner, horizon, schedule = None, stability_window = None))]
fn run_identification<'py>(
    py: Python<'py>,
    class_: &PyConceptClass,
    target: &PyLanguage,
    learner: &str,
    horizon: u64,
    schedule: Option<&Bound<'py, PyAny>>,
    stability_window: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let kind: LearnerKind = serde_json::from_value(serde_json::json!(learner)).map_err(err)?;
    let learner = kind.build(&class_.0).map_err(err)?;
    let schedule = schedule_or_fair(schedule)?;
    let window = stability_window.unwrap_or((horizon / 5).max(1));
    let t = arena::run_identification(&class_.0, &target.0, learner, &schedule, horizon, window).map_err(err)?;
    to_py(py, &t.summary)
}

/// Generation run; returns the trace summary dict.
#[pyfunction]
#[pyo3(signature = (class_, target, strategy, horizon, schedule = None, n0 = 1))]
fn run_generation<'py>(
    py: Python<'py>,
    class_: &PyConceptClass,
    target: &PyLanguage,
    strategy: &str,
    horizon: u64,
    schedule: Option<&Bound<'py, PyAny>>,
    n0: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let strategy: GeneratorStrategy = serde_json::from_value(serde_json::json!(strategy)).map_err(err)?;
    let gen = Generator::new(class_.0.clone(), strategy);
    let schedule = schedule_or_fair(schedule)?;
    let t = arena::run_generation(&class_.0, &target.0, &gen, &schedule, horizon, n0).map_err(err)?;
    to_py(py, &t.summary)
}

/// Diagonal adversary against a SUPERFINITE learner.
#[pyfunction]
fn adversary<'py>(py: Python<'py>, learner: &str, horizon: u64) -> PyResult<Bound<'py, PyAny>> {
    let kind: LearnerKind = serde_json::from_value(serde_json::json!(learner)).map_err(err)?;
    let learner = kind.build(&ConceptClass::superfinite()).map_err(err)?;
    let o = arena::adversarial_superfinite_run(learner, horizon).map_err(err)?;
    to_py(py, &o.trace.summary)
}

/// One feedback level; `params` overrides the level's defaults.
#[pyfunction]
#[pyo3(signature = (level, seed, params = None))]
fn run_level<'py>(
    py: Python<'py>,
    level: u8,
    seed: u64,
    params: Option<&Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyAny>> {
    let params: serde_json::Value = params.map(from_py).transpose()?.unwrap_or(serde_json::Value::Null);
    let env = LevelEnv::from_json(level, params).map_err(err)?;
    let out = arena::run_level(&env, seed).map_err(err)?;
    to_py(py, &out.summary_json())
}

/// Runs a suite config (JSON text) into `out`; returns the output path.
#[pyfunction]
#[pyo3(signature = (config, out, seed_override = None))]
fn run_suite(config: &str, out: PathBuf, seed_override: Option<u64>) -> PyResult<String> {
    let cfg = SuiteConfig::parse(config, seed_override).map_err(err)?;
    suite::run_suite(&cfg, &out).map(|p| p.display().to_string()).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pyfunction]
#[pyo3(signature = (run_dir, out = None))]
fn emit_report(run_dir: PathBuf, out: Option<PathBuf>) -> PyResult<String> {
    suite::emit_report(&run_dir, out.as_deref())
        .map(|p| p.display().to_string())
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn learnlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLanguage>()?;
    m.add_class::<PyConceptClass>()?;
    m.add_function(wrap_pyfunction!(vc_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(sample_bound, m)?)?;
    m.add_function(wrap_pyfunction!(risk_expr, m)?)?;
    m.add_function(wrap_pyfunction!(risk_pac_exact, m)?)?;
    m.add_function(wrap_pyfunction!(risk_pac_mc, m)?)?;
    m.add_function(wrap_pyfunction!(run_identification, m)?)?;
    m.add_function(wrap_pyfunction!(run_generation, m)?)?;
    m.add_function(wrap_pyfunction!(adversary, m)?)?;
    m.add_function(wrap_pyfunction!(run_level, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(emit_report, m)?)?;
    Ok(())
}
