//! Python bindings for `dephasing_core`.

use dephasing_core as core;
use num_complex::Complex64 as C64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Ohmic bath: coupling `j0`, cutoff `omega_c`, temperature as `T / T_c`.
#[pyclass(name = "BathParams", frozen, skip_from_py_object, module = "dephasing")]
#[derive(Clone)]
struct PyBathParams {
    inner: core::BathParams,
}

#[pymethods]
impl PyBathParams {
    #[new]
    #[pyo3(signature = (j0 = 1.0, omega_c = 1.0, temperature_ratio = 0.0, mode = "auto", n_modes = 4000, omega_max = 40.0))]
    fn new(
        j0: f64,
        omega_c: f64,
        temperature_ratio: f64,
        mode: &str,
        n_modes: usize,
        omega_max: f64,
    ) -> PyResult<Self> {
        let mode = match mode {
            "auto" if temperature_ratio == 0.0 => core::BathMode::ClosedFormZeroT,
            "auto" => core::BathMode::ClosedFormLowT,
            "discrete" => core::BathMode::DiscreteModes {
                n_modes,
                omega_max: omega_max * omega_c,
            },
            other => other.parse().map_err(py_err)?,
        };
        let inner = core::BathParams::from_temperature_ratio(j0, omega_c, temperature_ratio, mode).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn j0(&self) -> f64 {
        self.inner.j0()
    }

    #[getter]
    fn omega_c(&self) -> f64 {
        self.inner.omega_c()
    }

    /// `inf` at zero temperature.
    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta()
    }

    #[getter]
    fn temperature_ratio(&self) -> f64 {
        self.inner.temperature_ratio()
    }

    #[getter]
    fn mode(&self) -> &'static str {
        self.inner.mode().name()
    }

    fn __repr__(&self) -> String {
        format!(
            "BathParams(j0={}, omega_c={}, temperature_ratio={}, mode='{}')",
            self.inner.j0(),
            self.inner.omega_c(),
            self.inner.temperature_ratio(),
            self.inner.mode().name()
        )
    }
}

/// Pure two-particle state.
#[pyclass(name = "State", frozen, skip_from_py_object, module = "dephasing")]
#[derive(Clone)]
struct PyState {
    inner: core::StateVector,
}

#[pymethods]
impl PyState {
    /// Explicit amplitudes; the system is inferred from the length unless
    /// given. Amplitudes are renormalized.
    #[new]
    #[pyo3(signature = (amplitudes, system = None, omega0 = 0.0))]
    fn new(amplitudes: Vec<C64>, system: Option<&str>, omega0: f64) -> PyResult<Self> {
        let kind = match system {
            Some(s) => s.parse().map_err(py_err)?,
            None if amplitudes.len() == 6 => core::SystemKind::Fermionic,
            None if amplitudes.len() == 4 => core::SystemKind::Qubit,
            None => {
                return Err(PyValueError::new_err(format!(
                    "cannot infer a system from {} amplitudes",
                    amplitudes.len()
                )))
            }
        };
        let system = core::LevelSystem::new(kind, omega0).map_err(py_err)?;
        let inner = core::StateVector::normalized(system, amplitudes).map_err(py_err)?;
        Ok(Self { inner })
    }

    /// A named state such as `f1234` or `dfs_fermion(0.3)`.
    #[staticmethod]
    #[pyo3(signature = (name, alpha = None, omega0 = 0.0))]
    fn named(name: &str, alpha: Option<C64>, omega0: f64) -> PyResult<Self> {
        let inner = core::NamedState::parse(name, alpha)
            .and_then(|s| s.build(omega0))
            .map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn system(&self) -> &'static str {
        self.inner.system().kind().name()
    }

    #[getter]
    fn amplitudes(&self) -> Vec<C64> {
        self.inner.amplitudes().to_vec()
    }

    fn density_matrix(&self) -> PyDensityMatrix {
        PyDensityMatrix {
            inner: core::pure_density(&self.inner),
        }
    }

    fn __repr__(&self) -> String {
        format!("State(system='{}', amplitudes={:?})", self.system(), self.inner.amplitudes())
    }
}

#[pyclass(name = "DensityMatrix", frozen, skip_from_py_object, module = "dephasing")]
#[derive(Clone)]
struct PyDensityMatrix {
    inner: core::DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    /// Validating constructor from nested rows.
    #[new]
    #[pyo3(signature = (rows, system))]
    fn new(rows: Vec<Vec<C64>>, system: &str) -> PyResult<Self> {
        let kind: core::SystemKind = system.parse().map_err(py_err)?;
        let matrix = core::ComplexMatrix::from_rows(&rows).map_err(py_err)?;
        let system = core::LevelSystem::new(kind, 0.0).map_err(py_err)?;
        let inner = core::DensityMatrix::new(system, matrix).map_err(py_err)?;
        Ok(Self { inner })
    }

    /// State after dephasing for time `t`.
    fn evolve(&self, params: &PyBathParams, t: f64) -> PyResult<Self> {
        let inner = core::evolve(&self.inner, &params.inner, t).map_err(py_err)?;
        Ok(Self { inner })
    }

    fn concurrence(&self) -> PyResult<f64> {
        core::concurrence(&self.inner).map_err(py_err)
    }

    fn coherence(&self) -> f64 {
        core::coherence(&self.inner)
    }

    fn linear_entropy(&self) -> f64 {
        core::linear_entropy(&self.inner)
    }

    fn to_list(&self) -> Vec<Vec<C64>> {
        let m = self.inner.matrix();
        (0..m.dim()).map(|i| m.row(i).to_vec()).collect()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }
}

/// `(gamma, delta, theta)` at time `t`.
#[pyfunction]
fn bath_functions(params: &PyBathParams, t: f64) -> PyResult<(f64, f64, f64)> {
    let b = core::bath_functions(&params.inner, t).map_err(py_err)?;
    Ok((b.gamma, b.delta, b.theta))
}

/// Dict of lists `t`, `concurrence`, `coherence`, `linear_entropy`; `t` is
/// `omega_c * t`.
#[pyfunction]
#[pyo3(signature = (state, params, t_max, steps = 2001))]
fn time_series<'py>(
    py: Python<'py>,
    state: &PyState,
    params: &PyBathParams,
    t_max: f64,
    steps: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let s = py
        .detach(|| core::time_series(&state.inner, &params.inner, t_max, steps))
        .map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("t", s.times)?;
    d.set_item("concurrence", s.concurrence)?;
    d.set_item("coherence", s.coherence)?;
    d.set_item("linear_entropy", s.linear_entropy)?;
    Ok(d)
}

/// List of `(kind, omega_c * t)` with kind `"death"` or `"birth"`.
#[pyfunction]
fn detect_events(py: Python<'_>, state: &PyState, params: &PyBathParams, t_max: f64) -> PyResult<Vec<(String, f64)>> {
    let events = py
        .detach(|| core::detect_events(&state.inner, &params.inner, t_max))
        .map_err(py_err)?;
    Ok(events
        .into_iter()
        .map(|e| {
            let kind = match e.kind {
                core::EventKind::Death => "death",
                core::EventKind::Birth => "birth",
            };
            (kind.to_string(), e.time)
        })
        .collect())
}

/// `(regime, dfs_overlap)` with regime one of `invariant`, `orthogonal`,
/// `partial`.
#[pyfunction]
fn classify(state: &PyState) -> (String, f64) {
    let r = core::classify(&state.inner);
    let regime = match r.regime {
        core::Regime::Invariant => "invariant",
        core::Regime::Orthogonal => "orthogonal",
        core::Regime::Partial => "partial",
    };
    (regime.to_string(), r.dfs_overlap)
}

#[pyfunction]
fn saturation_entropy(state: &PyState) -> f64 {
    core::saturation_entropy(&state.inner)
}

#[pymodule]
fn dephasing(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBathParams>()?;
    m.add_class::<PyState>()?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_function(wrap_pyfunction!(bath_functions, m)?)?;
    m.add_function(wrap_pyfunction!(time_series, m)?)?;
    m.add_function(wrap_pyfunction!(detect_events, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(saturation_entropy, m)?)?;
    Ok(())
}
