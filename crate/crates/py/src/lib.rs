//! Python bindings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use twistqm::geometry as geo;
use twistqm::numeric::{fd_bound_spectrum as fd_spectrum, FDGrid};
use twistqm::scattering as sc;
use twistqm::spectrum::{self as sp, ModeNumbers};
use twistqm::validation;

fn to_py(err: twistqm::Error) -> PyErr {
    match err {
        twistqm::Error::InvalidInput(_)
        | twistqm::Error::NoPropagatingChannel { .. }
        | twistqm::Error::ThresholdDegeneracy { .. }
        | twistqm::Error::NotPositiveDefinite { .. }
        | twistqm::Error::SingularMetric { .. }
        | twistqm::Error::VarianceMismatch { .. } => PyValueError::new_err(err.to_string()),
        _ => PyRuntimeError::new_err(err.to_string()),
    }
}

fn mode(n: u32, l: i32) -> PyResult<ModeNumbers> {
    ModeNumbers::new(n, l).map_err(to_py)
}

#[pyclass(name = "PhysicsParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyPhysics(geo::PhysicsParams);

#[pymethods]
impl PyPhysics {
    #[new]
    #[pyo3(signature = (hbar = 1.0, mass = 1.0))]
    fn new(hbar: f64, mass: f64) -> PyResult<Self> {
        geo::PhysicsParams::new(hbar, mass, geo::UnitSystem::Natural)
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    fn natural() -> Self {
        Self(geo::PhysicsParams::natural())
    }

    /// Electron in nm / eV units with effective mass `mass_ratio * m_e`.
    #[staticmethod]
    #[pyo3(signature = (mass_ratio = 1.0))]
    fn electron_nm_ev(mass_ratio: f64) -> PyResult<Self> {
        geo::PhysicsParams::electron_nm_ev(mass_ratio).map(Self).map_err(to_py)
    }

    #[getter]
    fn hbar(&self) -> f64 {
        self.0.hbar
    }

    #[getter]
    fn mass(&self) -> f64 {
        self.0.mass
    }

    #[getter]
    fn units(&self) -> &'static str {
        self.0.unit_system.name()
    }

    /// hbar^2 / 2m
    fn kinetic_scale(&self) -> f64 {
        self.0.kinetic_scale()
    }

    fn __repr__(&self) -> String {
        format!("PhysicsParams(hbar={}, mass={}, units={:?})", self.0.hbar, self.0.mass, self.units())
    }
}

#[pyclass(name = "CylinderGeometry", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyGeometry(geo::CylinderGeometry);

#[pymethods]
impl PyGeometry {
    #[new]
    fn new(radius: f64, length: f64) -> PyResult<Self> {
        geo::CylinderGeometry::new(radius, length).map(Self).map_err(to_py)
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.0.radius
    }

    #[getter]
    fn length(&self) -> f64 {
        self.0.length
    }

    fn __repr__(&self) -> String {
        format!("CylinderGeometry(radius={}, length={})", self.0.radius, self.0.length)
    }
}

#[pyclass(name = "TwistProfile", frozen, from_py_object)]
#[derive(Clone)]
struct PyTwist(geo::TwistProfile);

#[pymethods]
impl PyTwist {
    #[staticmethod]
    fn constant(alpha: f64) -> Self {
        Self(geo::TwistProfile::Constant(alpha))
    }

    /// alpha(z) = alpha0 * z
    #[staticmethod]
    fn linear_ramp(alpha0: f64) -> Self {
        Self(geo::TwistProfile::LinearRamp(alpha0))
    }

    fn alpha(&self, z: f64) -> f64 {
        self.0.alpha(z)
    }

    fn f(&self, z: f64) -> f64 {
        self.0.f(z)
    }

    fn rotation(&self, z: f64) -> f64 {
        self.0.rotation(z)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "ScatteringScenario", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyScenario(sc::ScatteringScenario);

#[pymethods]
impl PyScenario {
    #[staticmethod]
    #[pyo3(signature = (geometry, alpha, l, physics = None))]
    fn embedded(geometry: PyGeometry, alpha: f64, l: i32, physics: Option<PyPhysics>) -> PyResult<Self> {
        let phys = physics.map_or_else(geo::PhysicsParams::natural, |p| p.0);
        sc::ScatteringScenario::new(sc::ScenarioKind::EmbeddedCylinder, geometry.0, alpha, l, phys)
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (geometry, alpha, l, physics = None))]
    fn free(geometry: PyGeometry, alpha: f64, l: i32, physics: Option<PyPhysics>) -> PyResult<Self> {
        let phys = physics.map_or_else(geo::PhysicsParams::natural, |p| p.0);
        sc::ScatteringScenario::new(sc::ScenarioKind::FreeParticle, geometry.0, alpha, l, phys)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind.name()
    }

    fn outside_threshold(&self) -> f64 {
        self.0.outside_threshold()
    }

    fn region_threshold(&self) -> f64 {
        self.0.region_threshold()
    }

    fn predicted_resonance(&self, n: u32) -> f64 {
        sc::predicted_resonance(n, &self.0)
    }
}

/// Covariant metric `(g_pp, g_pz, g_zz)` at twist factor `f`.
#[pyfunction]
fn twisted_metric(geometry: PyGeometry, f: f64) -> (f64, f64, f64) {
    let g = geo::twisted_metric(&geometry.0, f);
    (g.pp, g.pz, g.zz)
}

/// Mean curvature, Gaussian curvature and geometric potential at twist factor `f`.
#[pyfunction]
#[pyo3(signature = (geometry, f, physics = None))]
fn curvatures<'py>(py: Python<'py>, geometry: PyGeometry, f: f64, physics: Option<PyPhysics>) -> PyResult<Bound<'py, PyDict>> {
    let phys = physics.map_or_else(geo::PhysicsParams::natural, |p| p.0);
    let c = geo::surface_curvatures(&geometry.0, f);
    let d = PyDict::new(py);
    d.set_item("mean", c.mean)?;
    d.set_item("gaussian", c.gaussian)?;
    d.set_item("geometric_potential", geo::da_costa_potential(&c, &phys))?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (n, l, geometry, alpha, physics = None))]
fn effective_potential(n: u32, l: i32, geometry: PyGeometry, alpha: f64, physics: Option<PyPhysics>) -> PyResult<f64> {
    let phys = physics.map_or_else(geo::PhysicsParams::natural, |p| p.0);
    Ok(sp::effective_potential(mode(n, l)?, &geometry.0, alpha, &phys).value)
}

#[pyfunction]
#[pyo3(signature = (n, l, geometry, physics = None))]
fn eigenenergy(n: u32, l: i32, geometry: PyGeometry, physics: Option<PyPhysics>) -> PyResult<f64> {
    let phys = physics.map_or_else(geo::PhysicsParams::natural, |p| p.0);
    Ok(sp::eigenenergy(mode(n, l)?, &geometry.0, &phys))
}

/// `[(n, l, energy), ...]` sorted by energy.
#[pyfunction]
#[pyo3(signature = (n_max, l_max, geometry, physics = None))]
fn list_states(n_max: u32, l_max: u32, geometry: PyGeometry, physics: Option<PyPhysics>) -> Vec<(u32, i32, f64)> {
    let phys = physics.map_or_else(geo::PhysicsParams::natural, |p| p.0);
    sp::list_states(n_max, l_max, &geometry.0, &phys)
        .into_iter()
        .map(|(m, e)| (m.n, m.l, e))
        .collect()
}

#[pyfunction]
#[pyo3(signature = (twist, l, z, tol = 1e-10))]
fn twist_phase(twist: PyTwist, l: i32, z: f64, tol: f64) -> PyResult<f64> {
    sp::twist_phase(&twist.0, l, z, tol).map_err(to_py)
}

/// Richardson-extrapolated finite-difference energies of the lowest `count` levels.
#[pyfunction]
#[pyo3(signature = (l, geometry, twist, physics = None, points = 2000, count = 3))]
fn fd_bound_spectrum(
    l: i32,
    geometry: PyGeometry,
    twist: PyTwist,
    physics: Option<PyPhysics>,
    points: usize,
    count: usize,
) -> PyResult<Vec<f64>> {
    let phys = physics.map_or_else(geo::PhysicsParams::natural, |p| p.0);
    let grid = FDGrid::new(points, geometry.0.length).map_err(to_py)?;
    fd_spectrum(l, &geometry.0, &twist.0, &phys, grid, count)
        .map(|s| s.energies())
        .map_err(to_py)
}

/// Transmission/reflection and amplitudes at one energy.
#[pyfunction]
fn solve_scattering<'py>(py: Python<'py>, energy: f64, scenario: PyScenario) -> PyResult<Bound<'py, PyDict>> {
    let s = sc::solve_scattering(energy, &scenario.0).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("T", s.transmission)?;
    d.set_item("R", s.reflection)?;
    d.set_item("r", (s.r.re, s.r.im))?;
    d.set_item("t", (s.t.re, s.t.im))?;
    d.set_item("wavevector", s.wavevector)?;
    d.set_item("interface_currents", s.interface_currents.to_vec())?;
    Ok(d)
}

/// `[(energy, T, R, flag), ...]` over a strictly increasing energy grid.
#[pyfunction]
fn transmission_sweep(py: Python<'_>, scenario: PyScenario, energies: Vec<f64>) -> PyResult<Vec<(f64, f64, f64, &'static str)>> {
    let records = py
        .detach(|| sc::transmission_sweep(&scenario.0, &energies))
        .map_err(to_py)?;
    Ok(records
        .into_iter()
        .map(|r| (r.energy, r.transmission, r.reflection, r.flag.name()))
        .collect())
}

/// `[(id, name, passed, detail), ...]` for the built-in checks.
#[pyfunction]
fn run_validation(py: Python<'_>) -> Vec<(u32, &'static str, bool, String)> {
    py.detach(validation::run_all)
        .into_iter()
        .map(|o| (o.id, o.name, o.passed, o.detail))
        .collect()
}

#[pymodule]
fn twistqm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPhysics>()?;
    m.add_class::<PyGeometry>()?;
    m.add_class::<PyTwist>()?;
    m.add_class::<PyScenario>()?;
    m.add_function(wrap_pyfunction!(twisted_metric, m)?)?;
    m.add_function(wrap_pyfunction!(curvatures, m)?)?;
    m.add_function(wrap_pyfunction!(effective_potential, m)?)?;
    m.add_function(wrap_pyfunction!(eigenenergy, m)?)?;
    m.add_function(wrap_pyfunction!(list_states, m)?)?;
    m.add_function(wrap_pyfunction!(twist_phase, m)?)?;
    m.add_function(wrap_pyfunction!(fd_bound_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(solve_scattering, m)?)?;
    m.add_function(wrap_pyfunction!(transmission_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(run_validation, m)?)?;
    Ok(())
}
