//! Python bindings for `bandedge_ldos`.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use bandedge_ldos::crystal::{self, BandEdge, EdgeSide, Layer, UnitCell};
use bandedge_ldos::exponent::{self, EdgeApproach};
use bandedge_ldos::{ldos as core_ldos, modes, Error};

create_exception!(bandedge_ldos, NumericalError, PyValueError);

fn to_py(e: Error) -> PyErr {
    NumericalError::new_err(e.to_string())
}

/// Layered unit cell, given as a list of `(n, d)` pairs. The first layer is
/// centred at x = 0.
#[pyclass(name = "UnitCell", frozen)]
struct PyUnitCell {
    inner: UnitCell,
}

#[pymethods]
impl PyUnitCell {
    #[new]
    fn new(layers: Vec<(f64, f64)>) -> PyResult<Self> {
        let layers = layers
            .into_iter()
            .map(|(n, d)| Layer::new(n, d))
            .collect::<Result<Vec<_>, _>>()
            .map_err(to_py)?;
        Ok(Self {
            inner: UnitCell::new(layers).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn default() -> Self {
        Self {
            inner: UnitCell::default_crystal(),
        }
    }

    #[getter]
    fn layers(&self) -> Vec<(f64, f64)> {
        self.inner.layers().iter().map(|l| (l.n, l.d)).collect()
    }

    #[getter]
    fn period(&self) -> f64 {
        self.inner.period()
    }

    fn index_at(&self, x: f64) -> f64 {
        self.inner.index_at(x)
    }

    /// `cos(kL)`, i.e. half the trace of the cell matrix.
    fn half_trace(&self, omega: f64) -> PyResult<f64> {
        crystal::cell_half_trace(&self.inner, omega).map_err(to_py)
    }

    /// Bloch wavenumber in `[0, π/L]`, or `None` inside a gap.
    fn bloch_k(&self, omega: f64) -> PyResult<Option<f64>> {
        crystal::dispersion_k(&self.inner, omega).map_err(to_py)
    }

    fn group_velocity(&self, omega: f64) -> PyResult<f64> {
        crystal::group_velocity(&self.inner, omega).map_err(to_py)
    }

    fn band_edges(&self, omega_max: f64) -> PyResult<Vec<PyBandEdge>> {
        let edges = crystal::find_band_edges(&self.inner, omega_max).map_err(to_py)?;
        Ok(edges.into_iter().map(|inner| PyBandEdge { inner }).collect())
    }

    /// `(lower, upper)` edges of the gap-th gap.
    fn gap(&self, gap: usize) -> PyResult<(PyBandEdge, PyBandEdge)> {
        let (lo, hi) = crystal::find_gap(&self.inner, gap).map_err(to_py)?;
        Ok((PyBandEdge { inner: lo }, PyBandEdge { inner: hi }))
    }

    fn __repr__(&self) -> String {
        format!("UnitCell({:?})", self.layers())
    }
}

#[pyclass(name = "BandEdge", frozen)]
struct PyBandEdge {
    inner: BandEdge,
}

#[pymethods]
impl PyBandEdge {
    #[getter]
    fn band_index(&self) -> usize {
        self.inner.band_index
    }

    #[getter]
    fn gap_index(&self) -> usize {
        self.inner.gap_index
    }

    #[getter]
    fn side(&self) -> String {
        self.inner.side.to_string()
    }

    #[getter]
    fn omega_c(&self) -> f64 {
        self.inner.omega_c
    }

    #[getter]
    fn k_edge(&self) -> f64 {
        self.inner.k_edge
    }

    fn __repr__(&self) -> String {
        format!(
            "BandEdge(band_index={}, side='{}', omega_c={})",
            self.inner.band_index, self.inner.side, self.inner.omega_c
        )
    }
}

#[pyclass(name = "ExponentEstimate", frozen, get_all)]
struct PyExponentEstimate {
    x: f64,
    eta_hat: f64,
    k_hat: Option<f64>,
    z_converged: f64,
    converged: bool,
    /// `(z, log10 rho)` for each valid sample, in sampling order.
    samples: Vec<(f64, f64)>,
    /// `(z, dy/dz)`.
    slopes: Vec<(f64, f64)>,
}

fn parse_side(side: &str) -> PyResult<EdgeSide> {
    side.parse().map_err(|e: Error| PyValueError::new_err(e.to_string()))
}

/// Normalized `|E(x)|²` of the Bloch mode at `omega`, sampled on `grid_size`
/// points of one period. Returns `(x, intensity)` lists.
#[pyfunction]
#[pyo3(signature = (cell, omega, grid_size = 256))]
fn mode_intensity(cell: &PyUnitCell, omega: f64, grid_size: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let mode = modes::BlochMode::new(&cell.inner, omega, grid_size).map_err(to_py)?;
    Ok((mode.grid().to_vec(), mode.intensities()))
}

/// Total density of states per unit length.
#[pyfunction]
fn dos(cell: &PyUnitCell, omega: f64) -> PyResult<f64> {
    core_ldos::dos_total(&cell.inner, omega).map_err(to_py)
}

/// Mode-expansion LDOS of the infinite crystal.
#[pyfunction]
fn ldos(cell: &PyUnitCell, omega: f64, x: f64) -> PyResult<f64> {
    Ok(core_ldos::ldos_mode_expansion(&cell.inner, omega, x).map_err(to_py)?.rho)
}

/// LDOS of a vacuum-terminated stack of `n_periods` cells at `x` in the
/// central cell, from the Green's function at `ω(1 + i·loss)`.
#[pyfunction]
#[pyo3(signature = (cell, n_periods, omega, x, loss = core_ldos::DEFAULT_ORACLE_LOSS))]
fn ldos_finite_stack(cell: &PyUnitCell, n_periods: usize, omega: f64, x: f64, loss: f64) -> PyResult<f64> {
    core_ldos::ldos_greens_finite(&cell.inner, n_periods, omega, x, loss).map_err(to_py)
}

/// Log-log exponent of the LDOS at `x` approaching `edge`.
#[pyfunction]
#[pyo3(signature = (
    cell, edge, x,
    z_min = exponent::DEFAULT_Z_MIN,
    z_max = exponent::DEFAULT_Z_MAX,
    z_steps = exponent::DEFAULT_Z_STEPS,
    tol = exponent::DEFAULT_SLOPE_TOL,
))]
fn ldos_exponent(
    py: Python<'_>,
    cell: &PyUnitCell,
    edge: &PyBandEdge,
    x: f64,
    z_min: f64,
    z_max: f64,
    z_steps: usize,
    tol: f64,
) -> PyResult<PyExponentEstimate> {
    let r = py
        .detach(|| {
            let z = exponent::z_grid(z_min, z_max, z_steps)?;
            exponent::analyse_position(&cell.inner, EdgeApproach::from(&edge.inner), x, &z, tol)
        })
        .map_err(to_py)?;
    Ok(PyExponentEstimate {
        x: r.estimate.x,
        eta_hat: r.estimate.eta_hat,
        k_hat: r.estimate.k_hat,
        z_converged: r.estimate.z_converged,
        converged: r.estimate.converged,
        samples: r.samples.iter().filter(|s| s.valid).map(|s| (s.z, s.y)).collect(),
        slopes: r.slopes.iter().map(|s| (s.z, s.dydz)).collect(),
    })
}

/// Frequency `ω_c(1 ∓ u)` at relative detuning `u` from an edge of the given side.
#[pyfunction]
fn detuned_frequency(omega_c: f64, side: &str, u: f64) -> PyResult<f64> {
    Ok(EdgeApproach::new(omega_c, parse_side(side)?).omega_at(u))
}

#[pymodule]
#[pyo3(name = "bandedge_ldos")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyUnitCell>()?;
    m.add_class::<PyBandEdge>()?;
    m.add_class::<PyExponentEstimate>()?;
    m.add_function(wrap_pyfunction!(mode_intensity, m)?)?;
    m.add_function(wrap_pyfunction!(dos, m)?)?;
    m.add_function(wrap_pyfunction!(ldos, m)?)?;
    m.add_function(wrap_pyfunction!(ldos_finite_stack, m)?)?;
    m.add_function(wrap_pyfunction!(ldos_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(detuned_frequency, m)?)?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    Ok(())
}
