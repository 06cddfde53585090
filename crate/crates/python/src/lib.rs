//! Python bindings: integer sets, spectra, the subset-sum solvers, the matrix machine, the
//! multiplier chain, the overhead census and the Turing embedding.

use memcompute::cvm::{self, CvmChain};
use memcompute::overhead;
use memcompute::spectral::{self, Method};
use memcompute::tm::{simulate_tm_direct, TmConfig, TmSpec};
use memcompute::{dcram, oracles, umm, Error};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict};
use std::collections::BTreeMap;

fn to_py(e: Error) -> PyErr {
    if e.is_resource() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

#[pyclass(name = "IntegerSet", frozen, from_py_object)]
#[derive(Clone)]
struct PySet {
    inner: memcompute::IntegerSet,
}

#[pymethods]
impl PySet {
    #[new]
    #[pyo3(signature = (elements, allow_duplicates = false))]
    fn new(elements: Vec<i64>, allow_duplicates: bool) -> PyResult<Self> {
        let inner = if allow_duplicates {
            memcompute::IntegerSet::new_multiset(elements)
        } else {
            memcompute::IntegerSet::new(elements)
        };
        Ok(Self { inner: inner.map_err(to_py)? })
    }

    /// Parses one integer per line (`#` comments) or a JSON array.
    #[staticmethod]
    #[pyo3(signature = (text, allow_duplicates = false))]
    fn parse(text: &str, allow_duplicates: bool) -> PyResult<Self> {
        Ok(Self { inner: memcompute::IntegerSet::parse(text, allow_duplicates).map_err(to_py)? })
    }

    #[getter]
    fn elements(&self) -> Vec<i64> {
        self.inner.elements().to_vec()
    }

    #[getter]
    fn f_max(&self) -> u64 {
        spectral::f_max(&self.inner)
    }

    /// Samples per period, `2 f_max + 1`.
    #[getter]
    fn samples(&self) -> u64 {
        spectral::GridSpec::for_set(&self.inner).samples
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("IntegerSet({:?})", self.inner.elements())
    }
}

#[pyclass(name = "Spectrum", frozen, skip_from_py_object)]
struct PySpectrum {
    inner: memcompute::Spectrum,
}

#[pymethods]
impl PySpectrum {
    #[getter]
    fn window(&self) -> (i64, i64) {
        self.inner.window()
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual()
    }

    fn get(&self, f: i64) -> u64 {
        self.inner.get(f)
    }

    fn total(&self) -> u128 {
        self.inner.total()
    }

    /// Nonzero bins as `{f: count}`.
    fn support(&self) -> BTreeMap<i64, u64> {
        self.inner.support()
    }

    fn counts(&self) -> Vec<(i64, u64)> {
        self.inner.iter().collect()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __len__(&self) -> usize {
        self.inner.iter().count()
    }
}

fn wrap(spectrum: memcompute::Result<memcompute::Spectrum>) -> PyResult<PySpectrum> {
    spectrum.map(|inner| PySpectrum { inner }).map_err(to_py)
}

fn parse_method(name: &str) -> PyResult<Method> {
    name.parse().map_err(to_py)
}

#[pyfunction]
fn full_spectrum(set: &PySet) -> PyResult<PySpectrum> {
    wrap(spectral::full_spectrum(&set.inner))
}

#[pyfunction]
fn spectrum_window(set: &PySet, lo: i64, hi: i64) -> PyResult<PySpectrum> {
    wrap(spectral::spectrum_window(&set.inner, lo, hi))
}

#[pyfunction]
fn goertzel_count(py: Python<'_>, set: &PySet, s: i64) -> PyResult<u64> {
    py.detach(|| spectral::goertzel_count(&set.inner, s)).map_err(to_py)
}

#[pyfunction]
fn goertzel_counts(py: Python<'_>, set: &PySet, targets: Vec<i64>) -> PyResult<Vec<u64>> {
    py.detach(|| spectral::goertzel_counts(&set.inner, &targets)).map_err(to_py)
}

/// Subset count at `s`; `None` for the decision-only `dp` method.
#[pyfunction]
#[pyo3(signature = (set, s, method = "goertzel"))]
fn count_subsets(py: Python<'_>, set: &PySet, s: i64, method: &str) -> PyResult<Option<u64>> {
    let method = parse_method(method)?;
    py.detach(|| spectral::count_subsets(&set.inner, s, method)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (set, s, method = "goertzel"))]
fn solve_decision(py: Python<'_>, set: &PySet, s: i64, method: &str) -> PyResult<bool> {
    let method = parse_method(method)?;
    py.detach(|| spectral::solve_decision(&set.inner, s, method)).map_err(to_py)
}

/// A subset summing to `s` and the number of re-evaluations used, or `None`.
#[pyfunction]
#[pyo3(signature = (set, s, method = "goertzel"))]
fn recover_subset(py: Python<'_>, set: &PySet, s: i64, method: &str) -> PyResult<Option<(Vec<i64>, usize)>> {
    let method = parse_method(method)?;
    let r = py
        .detach(|| match method {
            Method::Goertzel => spectral::recover_subset(&set.inner, s),
            m => spectral::recover_subset_with(&set.inner, s, m),
        })
        .map_err(to_py)?;
    Ok(r.map(|r| (r.subset, r.evaluations)))
}

#[pyfunction]
fn eval_g<'py>(py: Python<'py>, set: &PySet, k: u64, samples: u64) -> PyResult<Bound<'py, PyComplex>> {
    let z = spectral::eval_g(&set.inner, k, samples).map_err(to_py)?;
    Ok(PyComplex::from_doubles(py, z.re, z.im))
}

#[pyfunction]
fn dp_decision(set: &PySet, s: i64) -> PyResult<bool> {
    oracles::dp_decision(&set.inner, s).map_err(to_py)
}

#[pyfunction]
fn brute_force_count(set: &PySet, s: i64) -> PyResult<u64> {
    oracles::brute_force_count(&set.inner, s).map_err(to_py)
}

#[pyfunction]
fn brute_force_spectrum(set: &PySet) -> PyResult<PySpectrum> {
    wrap(oracles::brute_force_spectrum(&set.inner))
}

#[pyfunction]
fn dcram_ssp<'py>(py: Python<'py>, set: &PySet, s: i64) -> PyResult<Bound<'py, PyDict>> {
    let o = dcram::dcram_ssp(&set.inner, s).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("found", o.found)?;
    d.set_item("iteration", o.iteration)?;
    d.set_item("subsets", o.subsets)?;
    d.set_item("iterations_run", o.iterations_run)?;
    d.set_item("peak_cells", o.peak_cells)?;
    Ok(d)
}

#[pyfunction]
fn memprocessor_count(n: u64, k: u64) -> PyResult<u128> {
    dcram::memprocessor_count(n, k).map_err(to_py)
}

#[pyfunction]
fn chain_output<'py>(py: Python<'py>, set: &PySet, t: f64) -> Bound<'py, PyComplex> {
    let z = cvm::chain_output(&CvmChain::from_set(&set.inner), t);
    PyComplex::from_doubles(py, z.re, z.im)
}

#[pyfunction]
fn analyzer_spectrum(set: &PySet, lo: i64, hi: i64) -> PyResult<PySpectrum> {
    wrap(cvm::analyzer_spectrum(&CvmChain::from_set(&set.inner), lo, hi))
}

#[pyfunction]
fn overhead_census<'py>(py: Python<'py>, set: &PySet) -> PyResult<Bound<'py, PyDict>> {
    let (r, state) = overhead::overhead_census(&set.inner).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("mass", r.mass)?;
    d.set_item("support_size", r.support_size)?;
    d.set_item("messages_per_cell", r.messages_per_cell)?;
    d.set_item("self_information_bits", r.self_information_bits)?;
    d.set_item("amplitudes", state.support)?;
    Ok(d)
}

#[pyfunction]
fn self_information(space_size: u128) -> PyResult<f64> {
    overhead::self_information(space_size).map_err(to_py)
}

fn config_tuple(c: TmConfig, blank: &str) -> (String, i64, String) {
    let tape = c.tape_string(blank);
    (c.state, c.head, tape)
}

#[pyclass(name = "TuringMachine", frozen, skip_from_py_object)]
struct PyTuringMachine {
    inner: TmSpec,
}

#[pymethods]
impl PyTuringMachine {
    /// Loads the JSON description (`states`, `alphabet`, `blank`, `input_alphabet`,
    /// `transitions`, `initial`, `finals`).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: TmSpec::from_json(text).map_err(to_py)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// Configurations `(state, head, tape)` of the direct simulator, the initial one first.
    #[pyo3(signature = (tape, max_steps = 10_000))]
    fn run_direct(&self, tape: &str, max_steps: usize) -> PyResult<Vec<(String, i64, String)>> {
        let trace = simulate_tm_direct(&self.inner, &TmSpec::tape_from_str(tape), max_steps).map_err(to_py)?;
        Ok(trace.into_iter().map(|c| config_tuple(c, &self.inner.blank)).collect())
    }

    /// The same trace read back from the embedded memcomputing machine.
    #[pyo3(signature = (tape, max_steps = 10_000))]
    fn run_embedded(&self, tape: &str, max_steps: usize) -> PyResult<Vec<(String, i64, String)>> {
        let embedded = umm::encode_utm(&self.inner, &TmSpec::tape_from_str(tape)).map_err(to_py)?;
        let (trace, _) = embedded.trace(max_steps).map_err(to_py)?;
        Ok(trace.into_iter().map(|c| config_tuple(c, &self.inner.blank)).collect())
    }
}

#[pymodule]
fn memcompute_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySet>()?;
    m.add_class::<PySpectrum>()?;
    m.add_class::<PyTuringMachine>()?;
    m.add_function(wrap_pyfunction!(full_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_window, m)?)?;
    m.add_function(wrap_pyfunction!(goertzel_count, m)?)?;
    m.add_function(wrap_pyfunction!(goertzel_counts, m)?)?;
    m.add_function(wrap_pyfunction!(count_subsets, m)?)?;
    m.add_function(wrap_pyfunction!(solve_decision, m)?)?;
    m.add_function(wrap_pyfunction!(recover_subset, m)?)?;
    m.add_function(wrap_pyfunction!(eval_g, m)?)?;
    m.add_function(wrap_pyfunction!(dp_decision, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_count, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(dcram_ssp, m)?)?;
    m.add_function(wrap_pyfunction!(memprocessor_count, m)?)?;
    m.add_function(wrap_pyfunction!(chain_output, m)?)?;
    m.add_function(wrap_pyfunction!(analyzer_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(overhead_census, m)?)?;
    m.add_function(wrap_pyfunction!(self_information, m)?)?;
    Ok(())
}
