//! Python bindings. Energies are in eV and distances in nm, as on the command line.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use spinshift::analysis::{self, SweepFamily, SweepScale, SweepSpec};
use spinshift::closed_forms;
use spinshift::kernel::{self, Orientation, Query};
use spinshift::output::Surface;
use spinshift::units::CONSTANTS;
use spinshift::{Error, QuadratureConfig};

create_exception!(spinshift_py, SpinshiftError, PyException);
create_exception!(spinshift_py, DomainError, SpinshiftError);
create_exception!(spinshift_py, ConvergenceError, SpinshiftError);
create_exception!(spinshift_py, NoPeakError, SpinshiftError);
create_exception!(spinshift_py, ConfigError, SpinshiftError);

fn to_py(err: Error) -> PyErr {
    let msg = err.to_string();
    match err {
        Error::Domain(_) => DomainError::new_err(msg),
        Error::Convergence { .. } => ConvergenceError::new_err(msg),
        Error::NoPeak { .. } => NoPeakError::new_err(msg),
        Error::Config(_) | Error::Parse(_) => ConfigError::new_err(msg),
    }
}

fn orientation(name: &str) -> PyResult<Orientation> {
    name.parse().map_err(to_py)
}

fn config(rel_tol: Option<f64>, abs_tol: Option<f64>, max_subdivisions: Option<usize>) -> PyResult<QuadratureConfig> {
    let mut cfg = QuadratureConfig::default();
    if let Some(v) = rel_tol {
        cfg.rel_tol = v;
    }
    if let Some(v) = abs_tol {
        cfg.abs_tol = v;
    }
    if let Some(v) = max_subdivisions {
        cfg.max_subdivisions = v;
    }
    cfg.validate().map_err(to_py)?;
    Ok(cfg)
}

/// Surface model. Build one with the static constructors.
#[pyclass(frozen, name = "Material", from_py_object)]
#[derive(Clone)]
struct PyMaterial(Surface);

#[pymethods]
impl PyMaterial {
    #[staticmethod]
    fn nondispersive(n: f64) -> Self {
        PyMaterial(Surface::NonDispersive { n })
    }

    #[staticmethod]
    fn plasma(omega_p_ev: f64) -> Self {
        PyMaterial(Surface::Plasma { omega_p_ev })
    }

    #[staticmethod]
    fn lorentz(omega_p_ev: f64, omega_t_ev: f64) -> Self {
        PyMaterial(Surface::Lorentz { omega_p_ev, omega_t_ev })
    }

    #[staticmethod]
    fn perfect() -> Self {
        PyMaterial(Surface::Perfect)
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.0.name()
    }

    fn __repr__(&self) -> String {
        format!("Material({:?})", self.0)
    }
}

#[pyclass(frozen, get_all, name = "ShiftResult")]
struct PyShiftResult {
    shape_factor: f64,
    rel_shift: f64,
    err_estimate: f64,
    path: &'static str,
    function_evaluations: usize,
    subdivisions: usize,
}

#[pymethods]
impl PyShiftResult {
    fn __repr__(&self) -> String {
        format!(
            "ShiftResult(shape_factor={}, rel_shift={:e}, err_estimate={:e}, path={})",
            self.shape_factor, self.rel_shift, self.err_estimate, self.path
        )
    }
}

#[pyclass(frozen, get_all, name = "PeakResult")]
struct PyPeakResult {
    found: bool,
    chi0_peak: Option<f64>,
    s_peak: Option<f64>,
    enhancement: Option<f64>,
    bracket: (f64, f64),
    iterations: usize,
    local_maxima: usize,
}

/// Shape factor and relative shift for a surface at distance `z_nm`.
#[pyfunction]
#[pyo3(signature = (material, z_nm, orientation, rel_tol=None, abs_tol=None, max_subdivisions=None))]
fn shift(
    py: Python<'_>,
    material: PyMaterial,
    z_nm: f64,
    orientation: &str,
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    max_subdivisions: Option<usize>,
) -> PyResult<PyShiftResult> {
    let cfg = config(rel_tol, abs_tol, max_subdivisions)?;
    let query = Query::new(material.0.to_model(&CONSTANTS), z_nm, self::orientation(orientation)?);
    let r = py.detach(|| kernel::shape_factor(&query, &cfg)).map_err(to_py)?;
    Ok(PyShiftResult {
        shape_factor: r.shape_factor,
        rel_shift: r.rel_shift,
        err_estimate: r.err_estimate,
        path: r.diagnostics.path.as_str(),
        function_evaluations: r.diagnostics.function_evaluations,
        subdivisions: r.diagnostics.subdivisions,
    })
}

#[pyfunction]
fn nondispersive_closed(n: f64, orientation: &str) -> PyResult<f64> {
    closed_forms::nondispersive_closed(n, self::orientation(orientation)?).map_err(to_py)
}

#[pyfunction]
fn perfect_reflector(orientation: &str) -> PyResult<f64> {
    Ok(closed_forms::perfect_reflector(self::orientation(orientation)?))
}

#[pyfunction]
fn plasma_small_distance(omega_p_z: f64, orientation: &str) -> PyResult<f64> {
    closed_forms::plasma_small_distance(omega_p_z, self::orientation(orientation)?).map_err(to_py)
}

/// Lorentz curve at fixed `omega_T z` against the matching non-dispersive one.
///
/// Returns `(chi0, S_dispersive, S_nondispersive)` tuples, in grid order.
#[pyfunction]
#[pyo3(signature = (omega_t_z, chi0_min, chi0_max, points, orientation, scale="linear"))]
fn sweep(
    py: Python<'_>,
    omega_t_z: f64,
    chi0_min: f64,
    chi0_max: f64,
    points: usize,
    orientation: &str,
    scale: &str,
) -> PyResult<Vec<(f64, f64, f64)>> {
    let scale = match scale {
        "linear" => SweepScale::Linear,
        "sqrt" => SweepScale::SqrtChi0,
        other => return Err(ConfigError::new_err(format!("unknown scale '{other}'"))),
    };
    let spec = SweepSpec {
        family: SweepFamily::LorentzAtFixedOmegaTz,
        omega_t_z,
        chi0_range: (chi0_min, chi0_max),
        points,
        orientation: self::orientation(orientation)?,
        scale,
    };
    let curve = py.detach(|| analysis::sweep(&spec, &QuadratureConfig::default())).map_err(to_py)?;
    Ok(curve.into_iter().map(|p| (p.chi0, p.s_dispersive, p.s_nondispersive)).collect())
}

#[pyfunction]
fn find_peak(py: Python<'_>, omega_t_z: f64, orientation: &str) -> PyResult<PyPeakResult> {
    let o = self::orientation(orientation)?;
    let p = py.detach(|| analysis::find_peak(omega_t_z, o, &QuadratureConfig::default())).map_err(to_py)?;
    Ok(PyPeakResult {
        found: p.found,
        chi0_peak: p.chi0_peak,
        s_peak: p.s_peak,
        enhancement: p.enhancement,
        bracket: p.bracket,
        iterations: p.iterations,
        local_maxima: p.local_maxima,
    })
}

#[pymodule]
fn spinshift_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyMaterial>()?;
    m.add_class::<PyShiftResult>()?;
    m.add_class::<PyPeakResult>()?;
    m.add_function(wrap_pyfunction!(shift, m)?)?;
    m.add_function(wrap_pyfunction!(nondispersive_closed, m)?)?;
    m.add_function(wrap_pyfunction!(perfect_reflector, m)?)?;
    m.add_function(wrap_pyfunction!(plasma_small_distance, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(find_peak, m)?)?;
    m.add("SpinshiftError", py.get_type::<SpinshiftError>())?;
    m.add("DomainError", py.get_type::<DomainError>())?;
    m.add("ConvergenceError", py.get_type::<ConvergenceError>())?;
    m.add("NoPeakError", py.get_type::<NoPeakError>())?;
    m.add("ConfigError", py.get_type::<ConfigError>())?;
    m.add("FINE_STRUCTURE_CONSTANT", CONSTANTS.alpha)?;
    Ok(())
}
