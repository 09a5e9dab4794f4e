//! Bound states of the twisted cylinder: effective potentials, the twist
//! phase, eigenenergies and sampled eigenfunctions.
//!
//! Writing `Z(z) = exp(i l int_0^z f) u(z)` removes the first-derivative term
//! from the longitudinal equation, leaving a real, twist-free problem for `u`
//! with potential [`gauge_potential_star`]. Twist therefore only enters the
//! eigenfunctions through a unimodular phase.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{
    da_costa_potential, surface_curvatures, twisted_metric, CylinderGeometry, PhysicsParams,
    TwistProfile,
};
use crate::numeric::quad::{integrate_adaptive, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeNumbers {
    pub n: u32,
    pub l: i32,
}

impl ModeNumbers {
    pub fn new(n: u32, l: i32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("longitudinal quantum number n must be >= 1".into()));
        }
        Ok(Self { n, l })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectivePotentialValue {
    pub value: f64,
    /// True when computed from the twisted `g_zz`, false for the gauge-reduced form.
    pub torsion_dependent: bool,
}

/// `(hbar^2 / 2 m R^2) (g_zz l^2 - 1/4)` with `g_zz = 1 + R^2 alpha^2`.
pub fn effective_potential(
    mode: ModeNumbers,
    geom: &CylinderGeometry,
    alpha: f64,
    phys: &PhysicsParams,
) -> EffectivePotentialValue {
    let g_zz = twisted_metric(geom, alpha).zz;
    let l2 = (mode.l as f64).powi(2);
    let v_g = da_costa_potential(&surface_curvatures(geom, alpha), phys);
    let centrifugal = phys.kinetic_scale() * g_zz * l2 / (geom.radius * geom.radius);
    EffectivePotentialValue {
        value: v_g + centrifugal,
        torsion_dependent: true,
    }
}

/// Twist-independent potential `(hbar^2 / 2 m R^2)(l^2 - 1/4)` felt by the
/// gauge-transformed amplitude.
pub fn gauge_potential_star(l: i32, geom: &CylinderGeometry, phys: &PhysicsParams) -> f64 {
    let l2 = (l as f64).powi(2);
    phys.kinetic_scale() / (geom.radius * geom.radius) * (l2 - 0.25)
}

pub fn gauge_potential_star_value(
    l: i32,
    geom: &CylinderGeometry,
    phys: &PhysicsParams,
) -> EffectivePotentialValue {
    EffectivePotentialValue {
        value: gauge_potential_star(l, geom, phys),
        torsion_dependent: false,
    }
}

/// `(hbar^2/2m)(n pi / L)^2 + (hbar^2 / 2 m R^2)(l^2 - 1/4)`.
pub fn eigenenergy(mode: ModeNumbers, geom: &CylinderGeometry, phys: &PhysicsParams) -> f64 {
    let k = mode.n as f64 * PI / geom.length;
    phys.kinetic_scale() * k * k + gauge_potential_star(mode.l, geom, phys)
}

/// Geometric phase `l int_0^z f(xi) dxi`.
pub fn twist_phase(twist: &TwistProfile, l: i32, z: f64, tol: f64) -> Result<f64> {
    twist_phase_between(twist, l, 0.0, z, tol)
}

/// `l int_{z0}^{z1} f(xi) dxi`; closed form for constant twist, adaptive
/// Simpson otherwise.
pub fn twist_phase_between(twist: &TwistProfile, l: i32, z0: f64, z1: f64, tol: f64) -> Result<f64> {
    if l == 0 {
        return Ok(0.0);
    }
    let lf = l as f64;
    match twist {
        TwistProfile::Constant(alpha) => Ok(lf * alpha * (z1 - z0)),
        _ => Ok(lf * integrate_adaptive(|x| twist.f(x), z0, z1, tol / lf.abs())?),
    }
}

/// Sampling grid for wavefunctions: `phi` uniform on `[0, 2 pi)`, `z` uniform
/// on `[0, L]` with both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub phi_points: usize,
    pub z_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            phi_points: 256,
            z_points: 256,
        }
    }
}

#[derive(Debug, Clone)]
pub struct WavefunctionSample {
    pub phi: Vec<f64>,
    pub z: Vec<f64>,
    /// Row-major in `z`: `values[iz * phi.len() + iphi]`.
    pub values: Vec<Complex64>,
    /// Area element `sqrt(det g) = R`.
    pub norm_weight: f64,
}

impl WavefunctionSample {
    pub fn value(&self, iphi: usize, iz: usize) -> Complex64 {
        self.values[iz * self.phi.len() + iphi]
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Riemann sum of `|psi|^2 R dphi dz`. Endpoint weights are irrelevant
    /// because the wavefunction vanishes there.
    pub fn norm(&self) -> f64 {
        let dphi = 2.0 * PI / self.phi.len() as f64;
        let dz = if self.z.len() > 1 {
            self.z[self.z.len() - 1] / (self.z.len() - 1) as f64
        } else {
            0.0
        };
        self.density().iter().sum::<f64>() * self.norm_weight * dphi * dz
    }
}

/// `psi = (pi R L)^{-1/2} sin(n pi z / L) exp(i l phi + i theta(z))` on a grid.
pub fn bound_wavefunction(
    mode: ModeNumbers,
    geom: &CylinderGeometry,
    twist: &TwistProfile,
    grid: GridSpec,
) -> Result<WavefunctionSample> {
    if grid.phi_points == 0 || grid.z_points < 2 {
        return Err(Error::InvalidInput("grid needs phi_points >= 1 and z_points >= 2".into()));
    }
    let (r, len) = (geom.radius, geom.length);
    let phi: Vec<f64> = (0..grid.phi_points)
        .map(|i| 2.0 * PI * i as f64 / grid.phi_points as f64)
        .collect();
    let last = grid.z_points - 1;
    let z: Vec<f64> = (0..grid.z_points)
        .map(|i| if i == last { len } else { len * i as f64 / last as f64 })
        .collect();

    // accumulate the phase panel by panel
    let mut theta = Vec::with_capacity(z.len());
    theta.push(0.0);
    for w in z.windows(2) {
        let prev = *theta.last().unwrap();
        theta.push(prev + twist_phase_between(twist, mode.l, w[0], w[1], DEFAULT_TOL)?);
    }

    let amplitude = 1.0 / (PI * r * len).sqrt();
    let kz = mode.n as f64 * PI / len;
    let lf = mode.l as f64;
    let mut values = Vec::with_capacity(z.len() * phi.len());
    for (iz, &zv) in z.iter().enumerate() {
        // sin(n pi) is not exactly zero in floating point
        let envelope = if iz == 0 || iz == last { 0.0 } else { amplitude * (kz * zv).sin() };
        for &p in &phi {
            values.push(Complex64::from_polar(envelope, lf * p + theta[iz]));
        }
    }
    Ok(WavefunctionSample {
        phi,
        z,
        values,
        norm_weight: r,
    })
}

/// Certificate that no bound state of mode `l` exists at or below
/// `threshold = V_eff*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubthresholdGuard {
    pub threshold: f64,
}

impl SubthresholdGuard {
    /// Fails if any eigenvalue lies at or below the threshold.
    pub fn check(&self, eigenvalues: &[f64]) -> Result<()> {
        match eigenvalues.iter().find(|&&e| e <= self.threshold) {
            Some(e) => Err(Error::InvalidInput(format!(
                "eigenvalue {e} lies at or below threshold {}",
                self.threshold
            ))),
            None => Ok(()),
        }
    }
}

pub fn assert_no_subthreshold_states(
    mode: ModeNumbers,
    geom: &CylinderGeometry,
    phys: &PhysicsParams,
) -> SubthresholdGuard {
    SubthresholdGuard {
        threshold: gauge_potential_star(mode.l, geom, phys),
    }
}

/// All states with `1 <= n <= n_max`, `|l| <= l_max`, sorted by energy, then
/// `n`, then `|l|`, with `l >= 0` before its negative partner.
pub fn list_states(
    n_max: u32,
    l_max: u32,
    geom: &CylinderGeometry,
    phys: &PhysicsParams,
) -> Vec<(ModeNumbers, f64)> {
    let l_max = l_max as i32;
    let mut states: Vec<(ModeNumbers, f64)> = (1..=n_max)
        .flat_map(|n| (-l_max..=l_max).map(move |l| ModeNumbers { n, l }))
        .map(|m| (m, eigenenergy(m, geom, phys)))
        .collect();
    states.sort_by(|a, b| {
        a.1.total_cmp(&b.1)
            .then(a.0.n.cmp(&b.0.n))
            .then(a.0.l.abs().cmp(&b.0.l.abs()))
            .then((a.0.l < 0).cmp(&(b.0.l < 0)))
    });
    states
}
