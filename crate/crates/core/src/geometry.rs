//! Strain, induced metric, fundamental forms and the geometric potential of a
//! twisted cylindrical surface parameterised by coordinates `(phi, z)`.
//!
//! All tensors are stored by their three independent components
//! `(pp, pz, zz)` together with a [`Variance`] flag. Raising or lowering is
//! explicit; arithmetic between tensors of different variance is rejected.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Reduced Planck constant in eV s.
pub const HBAR_EV_S: f64 = 6.582_119_569e-16;
/// Electron rest energy in eV.
pub const ELECTRON_REST_ENERGY_EV: f64 = 0.510_998_950_00e6;
/// Speed of light in nm/s.
pub const SPEED_OF_LIGHT_NM_S: f64 = 2.997_924_58e17;

/// Electron mass expressed in eV s^2 / nm^2.
pub fn electron_mass_ev_s2_per_nm2() -> f64 {
    ELECTRON_REST_ENERGY_EV / (SPEED_OF_LIGHT_NM_S * SPEED_OF_LIGHT_NM_S)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitSystem {
    /// hbar = m = 1, dimensionless lengths.
    Natural,
    /// Energies in eV, lengths in nm, time in s.
    ElectronNmEv,
}

impl UnitSystem {
    pub fn name(self) -> &'static str {
        match self {
            UnitSystem::Natural => "natural",
            UnitSystem::ElectronNmEv => "electron_nm_eV",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicsParams {
    pub hbar: f64,
    /// Effective mass m*.
    pub mass: f64,
    pub unit_system: UnitSystem,
}

impl Default for PhysicsParams {
    fn default() -> Self {
        Self::natural()
    }
}

impl PhysicsParams {
    pub fn new(hbar: f64, mass: f64, unit_system: UnitSystem) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidInput(format!("hbar must be positive, got {hbar}")));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidInput(format!("mass must be positive, got {mass}")));
        }
        Ok(Self {
            hbar,
            mass,
            unit_system,
        })
    }

    pub fn natural() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            unit_system: UnitSystem::Natural,
        }
    }

    /// eV / nm preset with `m* = mass_ratio * m_e`.
    pub fn electron_nm_ev(mass_ratio: f64) -> Result<Self> {
        Self::new(
            HBAR_EV_S,
            mass_ratio * electron_mass_ev_s2_per_nm2(),
            UnitSystem::ElectronNmEv,
        )
    }

    /// `hbar^2 / (2 m)`, the kinetic energy scale (energy * length^2).
    pub fn kinetic_scale(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }

    /// `2 m / hbar^2`.
    pub fn inverse_kinetic_scale(&self) -> f64 {
        2.0 * self.mass / (self.hbar * self.hbar)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderGeometry {
    pub radius: f64,
    pub length: f64,
}

impl CylinderGeometry {
    pub fn new(radius: f64, length: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!("radius must be positive, got {radius}")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidInput(format!("length must be positive, got {length}")));
        }
        Ok(Self { radius, length })
    }

    /// Covariant metric of the undeformed cylinder, `diag(R^2, 1)`.
    pub fn undeformed_metric(&self) -> Metric2 {
        Metric2::covariant(self.radius * self.radius, 0.0, 1.0)
    }
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Twist rate along the cylinder axis.
///
/// The embedding angle is `phi + alpha(z) * z`, so the quantity entering the
/// metric is `f(z) = alpha(z) + z * alpha'(z)`.
#[derive(Clone)]
pub enum TwistProfile {
    Constant(f64),
    /// `alpha(z) = alpha0 * z`, hence `f(z) = 2 alpha0 z`.
    LinearRamp(f64),
    Profiled {
        alpha: ScalarFn,
        derivative: ScalarFn,
        /// Step used for numerical derivatives of `f`.
        step: f64,
    },
}

impl fmt::Debug for TwistProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistProfile::Constant(a) => f.debug_tuple("Constant").field(a).finish(),
            TwistProfile::LinearRamp(a) => f.debug_tuple("LinearRamp").field(a).finish(),
            TwistProfile::Profiled { step, .. } => {
                f.debug_struct("Profiled").field("step", step).finish_non_exhaustive()
            }
        }
    }
}

impl TwistProfile {
    /// A profile with an analytic derivative.
    pub fn profiled<A, D>(alpha: A, derivative: D) -> Self
    where
        A: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        TwistProfile::Profiled {
            alpha: Arc::new(alpha),
            derivative: Arc::new(derivative),
            step: 1e-5,
        }
    }

    /// A profile whose derivative is taken by central differences with step
    /// `1e-6 * length`. Accuracy of `f` is then limited to roughly
    /// `1e-12 * |alpha'''| * length^2`; prefer [`TwistProfile::profiled`] when
    /// the derivative is known.
    pub fn with_fd_derivative<A>(alpha: A, length: f64) -> Self
    where
        A: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let h = 1e-6 * length;
        let alpha: ScalarFn = Arc::new(alpha);
        let a = Arc::clone(&alpha);
        TwistProfile::Profiled {
            alpha,
            derivative: Arc::new(move |z| (a(z + h) - a(z - h)) / (2.0 * h)),
            step: 1e-5 * length,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, TwistProfile::Constant(_))
    }

    pub fn alpha(&self, z: f64) -> f64 {
        match self {
            TwistProfile::Constant(a) => *a,
            TwistProfile::LinearRamp(a0) => a0 * z,
            TwistProfile::Profiled { alpha, .. } => alpha(z),
        }
    }

    pub fn alpha_prime(&self, z: f64) -> f64 {
        match self {
            TwistProfile::Constant(_) => 0.0,
            TwistProfile::LinearRamp(a0) => *a0,
            TwistProfile::Profiled { derivative, .. } => derivative(z),
        }
    }

    /// `f(z) = alpha(z) + z alpha'(z)`.
    pub fn f(&self, z: f64) -> f64 {
        match self {
            TwistProfile::Constant(a) => *a,
            TwistProfile::LinearRamp(a0) => 2.0 * a0 * z,
            TwistProfile::Profiled { .. } => self.alpha(z) + z * self.alpha_prime(z),
        }
    }

    /// `f'(z)`; numerical for profiled twists.
    pub fn f_prime(&self, z: f64) -> f64 {
        match self {
            TwistProfile::Constant(_) => 0.0,
            TwistProfile::LinearRamp(a0) => 2.0 * a0,
            TwistProfile::Profiled { step, .. } => {
                (self.f(z + step) - self.f(z - step)) / (2.0 * step)
            }
        }
    }

    /// Rotation angle of the cross-section at height `z`, `alpha(z) * z`.
    pub fn rotation(&self, z: f64) -> f64 {
        self.alpha(z) * z
    }
}

/// Pure torsion displacement `u^phi = alpha z`, `u^r = u^z = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementField {
    pub twist_rate: f64,
}

impl DisplacementField {
    pub fn pure_torsion(twist_rate: f64) -> Self {
        Self { twist_rate }
    }

    pub fn u_phi(&self, z: f64) -> f64 {
        self.twist_rate * z
    }

    pub fn u_r(&self) -> f64 {
        0.0
    }

    pub fn u_z(&self) -> f64 {
        0.0
    }

    /// `grad[i][k] = d_i u^k` on coordinates `(phi, z)`.
    pub fn contravariant_gradient(&self) -> [[f64; 2]; 2] {
        [[0.0, 0.0], [self.twist_rate, 0.0]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strain2 {
    pub pp: f64,
    pub pz: f64,
    pub zz: f64,
}

impl Strain2 {
    pub fn zero() -> Self {
        Self {
            pp: 0.0,
            pz: 0.0,
            zz: 0.0,
        }
    }

    pub fn as_matrix(&self) -> [[f64; 2]; 2] {
        [[self.pp, self.pz], [self.pz, self.zz]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variance {
    Covariant,
    Contravariant,
}

impl Variance {
    fn name(self) -> &'static str {
        match self {
            Variance::Covariant => "covariant",
            Variance::Contravariant => "contravariant",
        }
    }

    fn flipped(self) -> Self {
        match self {
            Variance::Covariant => Variance::Contravariant,
            Variance::Contravariant => Variance::Covariant,
        }
    }
}

/// Symmetric rank-2 tensor on `(phi, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric2 {
    pub pp: f64,
    pub pz: f64,
    pub zz: f64,
    pub variance: Variance,
}

impl Metric2 {
    pub fn covariant(pp: f64, pz: f64, zz: f64) -> Self {
        Self {
            pp,
            pz,
            zz,
            variance: Variance::Covariant,
        }
    }

    pub fn contravariant(pp: f64, pz: f64, zz: f64) -> Self {
        Self {
            pp,
            pz,
            zz,
            variance: Variance::Contravariant,
        }
    }

    pub fn det(&self) -> f64 {
        self.pp * self.zz - self.pz * self.pz
    }

    pub fn is_positive_definite(&self) -> bool {
        self.pp > 0.0 && self.det() > 0.0
    }

    pub fn as_matrix(&self) -> [[f64; 2]; 2] {
        [[self.pp, self.pz], [self.pz, self.zz]]
    }

    pub fn expect(&self, variance: Variance) -> Result<()> {
        if self.variance == variance {
            Ok(())
        } else {
            Err(Error::VarianceMismatch {
                expected: variance.name(),
                found: self.variance.name(),
            })
        }
    }

    /// Componentwise sum of two tensors of equal variance.
    pub fn add(&self, other: &Metric2) -> Result<Metric2> {
        other.expect(self.variance)?;
        Ok(Metric2 {
            pp: self.pp + other.pp,
            pz: self.pz + other.pz,
            zz: self.zz + other.zz,
            variance: self.variance,
        })
    }

    /// Matrix product `self * other`; only defined between opposite variances
    /// (the result is a mixed tensor, returned as a plain matrix).
    pub fn contract(&self, other: &Metric2) -> Result<[[f64; 2]; 2]> {
        other.expect(self.variance.flipped())?;
        let a = self.as_matrix();
        let b = other.as_matrix();
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Ok(out)
    }

    /// Full contraction `t^{ij} s_{ij}` with a tensor of opposite variance.
    pub fn trace_with(&self, other: &Metric2) -> Result<f64> {
        other.expect(self.variance.flipped())?;
        Ok(self.pp * other.pp + 2.0 * self.pz * other.pz + self.zz * other.zz)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureData {
    /// Second fundamental form `h_ij`.
    pub second_form: Metric2,
    pub mean: f64,
    pub gaussian: f64,
}

/// Green-Lagrange strain of the pure torsion field with constant rate `alpha`.
///
/// Partial derivatives replace covariant ones: the flat `(phi, z)` chart of the
/// cylinder has vanishing connection coefficients.
pub fn strain_from_linear_twist(geom: &CylinderGeometry, alpha: f64) -> Strain2 {
    let field = DisplacementField::pure_torsion(alpha);
    let grad_up = field.contravariant_gradient();
    let lower = [geom.radius * geom.radius, 1.0];
    // d_i u_k = g_kk d_i u^k for the diagonal, coordinate-independent base metric
    let grad_down = [
        [grad_up[0][0] * lower[0], grad_up[0][1] * lower[1]],
        [grad_up[1][0] * lower[0], grad_up[1][1] * lower[1]],
    ];
    let eps = |i: usize, j: usize| {
        let quad: f64 = (0..2).map(|k| grad_up[i][k] * grad_down[j][k]).sum();
        0.5 * (grad_down[i][j] + grad_down[j][i] + quad)
    };
    Strain2 {
        pp: eps(0, 0),
        pz: eps(0, 1),
        zz: eps(1, 1),
    }
}

/// Deformed metric `g' = g + 2 eps`.
pub fn metric_from_strain(base: &Metric2, strain: &Strain2) -> Result<Metric2> {
    base.expect(Variance::Covariant)?;
    let g = Metric2::covariant(
        base.pp + 2.0 * strain.pp,
        base.pz + 2.0 * strain.pz,
        base.zz + 2.0 * strain.zz,
    );
    if !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite {
            g_pp: g.pp,
            det: g.det(),
        });
    }
    Ok(g)
}

/// Induced metric `[[R^2, R^2 f], [R^2 f, 1 + R^2 f^2]]` for local twist `f`.
pub fn twisted_metric(geom: &CylinderGeometry, f_value: f64) -> Metric2 {
    let r2 = geom.radius * geom.radius;
    Metric2::covariant(r2, r2 * f_value, 1.0 + r2 * f_value * f_value)
}

/// Relative determinant threshold below which a metric counts as singular.
pub const SINGULAR_METRIC_TOL: f64 = 1e-14;

pub fn inverse_metric(g: &Metric2) -> Result<Metric2> {
    let det = g.det();
    let scale = (g.pp.abs() * g.zz.abs()).max(g.pz * g.pz);
    if !(det > SINGULAR_METRIC_TOL * scale) || scale == 0.0 {
        return Err(Error::SingularMetric { det });
    }
    Ok(Metric2 {
        pp: g.zz / det,
        pz: -g.pz / det,
        zz: g.pp / det,
        variance: g.variance.flipped(),
    })
}

/// Closed-form second fundamental form and curvatures of the twisted cylinder.
pub fn surface_curvatures(geom: &CylinderGeometry, f_value: f64) -> CurvatureData {
    let r = geom.radius;
    CurvatureData {
        second_form: Metric2::covariant(-r, -r * f_value, -r * f_value * f_value),
        mean: 0.5 / r,
        gaussian: 0.0,
    }
}

/// Mean and Gaussian curvature recomputed from the two fundamental forms,
/// `M = -g^{ij} h_ij / 2`, `K = det h / det g` (sign convention matching the
/// inward normal used by [`surface_curvatures`]).
pub fn curvatures_from_forms(g: &Metric2, h: &Metric2) -> Result<(f64, f64)> {
    g.expect(Variance::Covariant)?;
    h.expect(Variance::Covariant)?;
    let g_inv = inverse_metric(g)?;
    let mean = -0.5 * g_inv.trace_with(h)?;
    let gaussian = h.det() / g.det();
    Ok((mean, gaussian))
}

/// da Costa potential `-(hbar^2 / 2m) (M^2 - K)`.
pub fn da_costa_potential(curv: &CurvatureData, phys: &PhysicsParams) -> f64 {
    -phys.kinetic_scale() * (curv.mean * curv.mean - curv.gaussian)
}

fn embedding(geom: &CylinderGeometry, twist: &TwistProfile, phi: f64, z: f64) -> [f64; 3] {
    let angle = phi + twist.rotation(z);
    [geom.radius * angle.cos(), geom.radius * angle.sin(), z]
}

/// First fundamental form from central differences of the embedding
/// `r(phi, z) = (R cos(phi + alpha(z) z), R sin(phi + alpha(z) z), z)`.
pub fn metric_from_embedding_fd(
    geom: &CylinderGeometry,
    twist: &TwistProfile,
    point: (f64, f64),
    step: f64,
) -> Result<Metric2> {
    if !(step > 0.0) {
        return Err(Error::InvalidInput(format!("step must be positive, got {step}")));
    }
    let (phi, z) = point;
    let diff = |a: [f64; 3], b: [f64; 3]| {
        [
            (a[0] - b[0]) / (2.0 * step),
            (a[1] - b[1]) / (2.0 * step),
            (a[2] - b[2]) / (2.0 * step),
        ]
    };
    let d_phi = diff(
        embedding(geom, twist, phi + step, z),
        embedding(geom, twist, phi - step, z),
    );
    let d_z = diff(
        embedding(geom, twist, phi, z + step),
        embedding(geom, twist, phi, z - step),
    );
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    Ok(Metric2::covariant(
        dot(d_phi, d_phi),
        dot(d_phi, d_z),
        dot(d_z, d_z),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(r: f64) -> CylinderGeometry {
        CylinderGeometry::new(r, 1.0).unwrap()
    }

    fn assert_metric(m: &Metric2, expected: [f64; 3], tol: f64) {
        assert!((m.pp - expected[0]).abs() <= tol, "pp {} vs {}", m.pp, expected[0]);
        assert!((m.pz - expected[1]).abs() <= tol, "pz {} vs {}", m.pz, expected[1]);
        assert!((m.zz - expected[2]).abs() <= tol, "zz {} vs {}", m.zz, expected[2]);
    }

    #[test]
    fn electron_preset_kinetic_scale() {
        let phys = PhysicsParams::electron_nm_ev(1.0).unwrap();
        assert!((phys.kinetic_scale() - 0.0380998).abs() < 5e-8);
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(PhysicsParams::new(0.0, 1.0, UnitSystem::Natural).is_err());
        assert!(PhysicsParams::new(1.0, -1.0, UnitSystem::Natural).is_err());
        assert!(CylinderGeometry::new(-1.0, 1.0).is_err());
        assert!(CylinderGeometry::new(1.0, 0.0).is_err());
    }

    #[test]
    fn strain_examples() {
        assert_eq!(strain_from_linear_twist(&geom(2.0), 0.0), Strain2::zero());
        let s = strain_from_linear_twist(&geom(2.0), 0.5);
        assert_eq!(s.as_matrix(), [[0.0, 1.0], [1.0, 0.5]]);
        let s = strain_from_linear_twist(&geom(1.0), 1.0);
        assert_eq!(s.as_matrix(), [[0.0, 0.5], [0.5, 0.5]]);
    }

    #[test]
    fn metric_from_strain_examples() {
        let g = geom(2.0);
        let base = g.undeformed_metric();
        assert_eq!(metric_from_strain(&base, &Strain2::zero()).unwrap(), base);
        let m = metric_from_strain(&base, &strain_from_linear_twist(&g, 0.5)).unwrap();
        assert_metric(&m, [4.0, 2.0, 2.0], 0.0);
        assert_eq!(m, twisted_metric(&g, 0.5));
    }

    #[test]
    fn metric_from_strain_rejects_bad_input() {
        let base = geom(1.0).undeformed_metric();
        let crush = Strain2 {
            pp: -1.0,
            pz: 0.0,
            zz: 0.0,
        };
        assert!(matches!(
            metric_from_strain(&base, &crush),
            Err(Error::NotPositiveDefinite { .. })
        ));
        let contra = Metric2::contravariant(1.0, 0.0, 1.0);
        assert!(matches!(
            metric_from_strain(&contra, &Strain2::zero()),
            Err(Error::VarianceMismatch { .. })
        ));
    }

    #[test]
    fn twisted_metric_examples() {
        assert_metric(&twisted_metric(&geom(2.0), 0.5), [4.0, 2.0, 2.0], 0.0);
        assert_metric(&twisted_metric(&geom(2.0), 0.0), [4.0, 0.0, 1.0], 0.0);
        let m = twisted_metric(&geom(1.0), 3.0);
        assert_metric(&m, [1.0, 3.0, 10.0], 0.0);
        assert_eq!(m.det(), 1.0);
    }

    #[test]
    fn inverse_metric_examples() {
        let inv = inverse_metric(&Metric2::covariant(4.0, 2.0, 2.0)).unwrap();
        assert_eq!(inv.variance, Variance::Contravariant);
        assert_metric(&inv, [0.5, -0.5, 1.0], 1e-15);
        let inv = inverse_metric(&Metric2::covariant(9.0, 0.0, 1.0)).unwrap();
        assert_metric(&inv, [1.0 / 9.0, 0.0, 1.0], 1e-15);
        let inv = inverse_metric(&Metric2::covariant(1.0, 3.0, 10.0)).unwrap();
        assert_metric(&inv, [10.0, -3.0, 1.0], 1e-14);
    }

    #[test]
    fn singular_metric_is_rejected() {
        assert!(matches!(
            inverse_metric(&Metric2::covariant(1.0, 1.0, 1.0)),
            Err(Error::SingularMetric { .. })
        ));
        assert!(inverse_metric(&Metric2::covariant(0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn variance_mixing_is_an_error() {
        let a = Metric2::covariant(1.0, 0.0, 1.0);
        let b = Metric2::contravariant(1.0, 0.0, 1.0);
        assert!(a.add(&b).is_err());
        assert!(a.contract(&a).is_err());
        assert!(a.contract(&b).is_ok());
    }

    #[test]
    fn curvature_examples() {
        let c = surface_curvatures(&geom(1.0), 0.5);
        assert_metric(&c.second_form, [-1.0, -0.5, -0.25], 0.0);
        assert_eq!((c.gaussian, c.mean), (0.0, 0.5));
        for f in [0.0, 7.0] {
            let c = surface_curvatures(&geom(2.0), f);
            assert_eq!((c.gaussian, c.mean), (0.0, 0.25));
        }
    }

    #[test]
    fn curvatures_recomputed_from_forms() {
        for (r, f) in [(1.0, 0.5), (2.0, 0.0), (2.0, 7.0), (0.3, -2.5)] {
            let g = geom(r);
            let c = surface_curvatures(&g, f);
            let (m, k) = curvatures_from_forms(&twisted_metric(&g, f), &c.second_form).unwrap();
            assert!((m - 0.5 / r).abs() < 1e-14 * (1.0 + f * f) / r, "M = {m}");
            assert!(k.abs() < 1e-14 * (1.0 + f * f), "K = {k}");
        }
    }

    #[test]
    fn da_costa_examples() {
        let phys = PhysicsParams::natural();
        let v = da_costa_potential(&surface_curvatures(&geom(1.0), 0.0), &phys);
        assert_eq!(v, -0.125);
        let v = da_costa_potential(&surface_curvatures(&geom(2.0), 0.0), &phys);
        assert_eq!(v, -0.03125);
        for alpha in [0.1, 1.0, -3.0] {
            let v = da_costa_potential(&surface_curvatures(&geom(1.0), alpha), &phys);
            assert_eq!(v, -0.125);
        }
    }

    #[test]
    fn embedding_fd_examples() {
        let twist = TwistProfile::Constant(0.5);
        for point in [(0.0, 0.0), (1.3, 0.7), (4.0, -2.0)] {
            let m = metric_from_embedding_fd(&geom(2.0), &twist, point, 1e-5).unwrap();
            assert_metric(&m, [4.0, 2.0, 2.0], 1e-6);
        }
        let m = metric_from_embedding_fd(&geom(1.0), &TwistProfile::Constant(0.0), (0.4, 0.2), 1e-5)
            .unwrap();
        assert_metric(&m, [1.0, 0.0, 1.0], 1e-6);

        let ramp = TwistProfile::profiled(|z| 0.3 * z, |_| 0.3);
        let m = metric_from_embedding_fd(&geom(1.0), &ramp, (0.0, 2.0), 1e-5).unwrap();
        let expected = twisted_metric(&geom(1.0), 1.2);
        assert_metric(&m, [expected.pp, expected.pz, expected.zz], 1e-6);
        assert!(metric_from_embedding_fd(&geom(1.0), &ramp, (0.0, 2.0), 0.0).is_err());
    }

    #[test]
    fn twist_profile_f_values() {
        let ramp = TwistProfile::LinearRamp(0.3);
        assert!((ramp.f(2.0) - 1.2).abs() < 1e-15);
        assert_eq!(ramp.f_prime(5.0), 0.6);
        let custom = TwistProfile::profiled(|z| 0.3 * z, |_| 0.3);
        assert!((custom.f(2.0) - 1.2).abs() < 1e-15);
        assert!((custom.f_prime(2.0) - 0.6).abs() < 1e-9);
        let fd = TwistProfile::with_fd_derivative(|z: f64| 0.3 * z * z, 1.0);
        assert!((fd.f(1.5) - (0.3 * 2.25 + 1.5 * 0.9)).abs() < 1e-8);
        assert!((TwistProfile::Constant(0.7).f(123.0) - 0.7).abs() == 0.0);
    }
}
