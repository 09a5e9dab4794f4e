//! Transmission through a twisted section of length `L`.
//!
//! Two scenarios share the same matching problem:
//!
//! * [`ScenarioKind::EmbeddedCylinder`]: the section sits inside an infinite
//!   untwisted cylinder, so the outside channel sees `V_eff(alpha = 0)`.
//! * [`ScenarioKind::FreeParticle`]: the section sits in free space, so the
//!   outside wavevector is `sqrt(2 m e) / hbar`.
//!
//! Inside the section `Z = A exp(r1 z) + B exp(r2 z)`. The amplitudes follow
//! from continuity of `Z` and of the probability current, which in the
//! twisted region carries the extra `-(hbar/m) l alpha |Z|^2` term. The 4x4
//! system is assembled exactly in that form and solved densely.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{CylinderGeometry, PhysicsParams};
use crate::numeric::linalg::{solve_linear_complex, ComplexMatrix};
use crate::spectrum::{effective_potential, gauge_potential_star, ModeNumbers};

/// Energies closer than this to a threshold are refused.
pub const THRESHOLD_WINDOW: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    EmbeddedCylinder,
    FreeParticle,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::EmbeddedCylinder => "embedded",
            ScenarioKind::FreeParticle => "free",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringScenario {
    pub kind: ScenarioKind,
    /// `length` is the length of the twisted section.
    pub geom: CylinderGeometry,
    pub alpha: f64,
    /// Azimuthal quantum number; conserved, so `n` plays no role here.
    pub l: i32,
    pub phys: PhysicsParams,
}

impl ScatteringScenario {
    pub fn new(
        kind: ScenarioKind,
        geom: CylinderGeometry,
        alpha: f64,
        l: i32,
        phys: PhysicsParams,
    ) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidInput("alpha must be finite".into()));
        }
        Ok(Self {
            kind,
            geom,
            alpha,
            l,
            phys,
        })
    }

    pub fn embedded(geom: CylinderGeometry, alpha: f64, l: i32, phys: PhysicsParams) -> Self {
        Self {
            kind: ScenarioKind::EmbeddedCylinder,
            geom,
            alpha,
            l,
            phys,
        }
    }

    pub fn free(geom: CylinderGeometry, alpha: f64, l: i32, phys: PhysicsParams) -> Self {
        Self {
            kind: ScenarioKind::FreeParticle,
            geom,
            alpha,
            l,
            phys,
        }
    }

    fn mode(&self) -> ModeNumbers {
        ModeNumbers { n: 1, l: self.l }
    }

    /// Lowest energy with a propagating outside channel.
    pub fn outside_threshold(&self) -> f64 {
        match self.kind {
            ScenarioKind::EmbeddedCylinder => {
                effective_potential(self.mode(), &self.geom, 0.0, &self.phys).value
            }
            ScenarioKind::FreeParticle => 0.0,
        }
    }

    /// `V_eff*`, where the section switches from evanescent to oscillatory.
    pub fn region_threshold(&self) -> f64 {
        gauge_potential_star(self.l, &self.geom, &self.phys)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionRoots {
    pub r1: Complex64,
    pub r2: Complex64,
}

/// Characteristic roots `r_{1,2} = i l alpha -/+ sqrt((2m/hbar^2)(V_eff - e) - l^2 alpha^2)`.
///
/// A negative radicand `-k^2` maps to `+i k`, so above `V_eff*` the roots are
/// `i (l alpha -/+ k2)` with `k2 > 0`.
pub fn region_roots(energy: f64, scenario: &ScatteringScenario) -> Result<RegionRoots> {
    let threshold = scenario.region_threshold();
    if (energy - threshold).abs() < THRESHOLD_WINDOW {
        return Err(Error::ThresholdDegeneracy { energy, threshold });
    }
    let v_eff = effective_potential(scenario.mode(), &scenario.geom, scenario.alpha, &scenario.phys);
    let l_alpha = scenario.l as f64 * scenario.alpha;
    let radicand = scenario.phys.inverse_kinetic_scale() * (v_eff.value - energy) - l_alpha * l_alpha;
    let root = if radicand >= 0.0 {
        Complex64::new(radicand.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-radicand).sqrt())
    };
    let shift = Complex64::new(0.0, l_alpha);
    let roots = RegionRoots {
        r1: shift - root,
        r2: shift + root,
    };
    let scale = roots.r1.norm().max(roots.r2.norm()).max(1.0);
    if (roots.r1 - roots.r2).norm() < 1e-12 * scale {
        return Err(Error::ThresholdDegeneracy { energy, threshold });
    }
    Ok(roots)
}

/// Wavevector of the plane waves outside the twisted section.
pub fn outside_wavevector(energy: f64, scenario: &ScatteringScenario) -> Result<f64> {
    let threshold = scenario.outside_threshold();
    if (energy - threshold).abs() < THRESHOLD_WINDOW {
        return Err(Error::ThresholdDegeneracy { energy, threshold });
    }
    if energy < threshold {
        return Err(Error::NoPropagatingChannel { energy, threshold });
    }
    Ok((scenario.phys.inverse_kinetic_scale() * (energy - threshold)).sqrt())
}

/// `j = (i hbar / 2m)(Z conj(Z') - conj(Z) Z') - (hbar/m) l alpha |Z|^2`.
pub fn probability_current(z: Complex64, zp: Complex64, l: i32, alpha: f64, phys: &PhysicsParams) -> f64 {
    let hbar_over_m = phys.hbar / phys.mass;
    let i = Complex64::i();
    let kinetic = (i * 0.5 * hbar_over_m * (z * zp.conj() - z.conj() * zp)).re;
    kinetic - hbar_over_m * l as f64 * alpha * z.norm_sqr()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringSolution {
    pub r: Complex64,
    pub t: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub transmission: f64,
    pub reflection: f64,
    /// Net flux left of the section in units of `hbar k / m` (equals `1 - R`).
    pub current_in: f64,
    /// Transmitted flux in units of `hbar k / m` (equals `T`).
    pub current_out: f64,
    /// Flux at `0-`, `0+`, `L-`, `L+` in units of `hbar k / m`.
    pub interface_currents: [f64; 4],
    pub wavevector: f64,
    pub roots: RegionRoots,
}

/// Solves the four matching equations for `(r, A, B, t)` with unit incident
/// amplitude.
pub fn solve_scattering(energy: f64, scenario: &ScatteringScenario) -> Result<ScatteringSolution> {
    let k = outside_wavevector(energy, scenario)?;
    let roots = region_roots(energy, scenario)?;
    let RegionRoots { r1, r2 } = roots;
    let len = scenario.geom.length;
    let i = Complex64::i();
    let ik = i * k;
    let il_alpha = i * (scenario.l as f64 * scenario.alpha);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let e1 = (r1 * len).exp();
    let e2 = (r2 * len).exp();
    let ek = (ik * len).exp();

    // unknowns (r, A, B, t)
    let m = ComplexMatrix::from_rows(&[
        // 1 + r = A + B
        vec![one, -one, -one, zero],
        // ik (1 - r) = r1 A + r2 B - i l alpha (A + B)
        vec![-ik, -(r1 - il_alpha), -(r2 - il_alpha), zero],
        // t e^{ikL} = A e^{r1 L} + B e^{r2 L}
        vec![zero, -e1, -e2, ek],
        // ik t e^{ikL} = r1 A e^{r1 L} + r2 B e^{r2 L} - i l alpha (A e^{r1 L} + B e^{r2 L})
        vec![zero, -(r1 - il_alpha) * e1, -(r2 - il_alpha) * e2, ik * ek],
    ])
    .map_err(|_| Error::SingularMatch {
        condition: f64::INFINITY,
    })?;
    let rhs = [-one, -ik, zero, zero];
    let x = solve_linear_complex(&m, &rhs)?;
    let (r, a, b, t) = (x[0], x[1], x[2], x[3]);

    let phys = &scenario.phys;
    let unit = phys.hbar * k / phys.mass;
    let z_left = one + r;
    let zp_left = ik * (one - r);
    let z_in0 = a + b;
    let zp_in0 = r1 * a + r2 * b;
    let z_inl = a * e1 + b * e2;
    let zp_inl = r1 * a * e1 + r2 * b * e2;
    let z_right = t * ek;
    let zp_right = ik * t * ek;
    let interface_currents = [
        probability_current(z_left, zp_left, scenario.l, 0.0, phys) / unit,
        probability_current(z_in0, zp_in0, scenario.l, scenario.alpha, phys) / unit,
        probability_current(z_inl, zp_inl, scenario.l, scenario.alpha, phys) / unit,
        probability_current(z_right, zp_right, scenario.l, 0.0, phys) / unit,
    ];

    Ok(ScatteringSolution {
        r,
        t,
        a,
        b,
        transmission: t.norm_sqr(),
        reflection: r.norm_sqr(),
        current_in: interface_currents[0],
        current_out: interface_currents[3],
        interface_currents,
        wavevector: k,
        roots,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepFlag {
    Ok,
    SubThreshold,
    Degenerate,
}

impl SweepFlag {
    pub fn name(self) -> &'static str {
        match self {
            SweepFlag::Ok => "ok",
            SweepFlag::SubThreshold => "sub_threshold",
            SweepFlag::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub energy: f64,
    pub transmission: f64,
    pub reflection: f64,
    pub flag: SweepFlag,
}

fn sweep_point(energy: f64, scenario: &ScatteringScenario) -> SweepRecord {
    match solve_scattering(energy, scenario) {
        Ok(sol) => SweepRecord {
            energy,
            transmission: sol.transmission,
            reflection: sol.reflection,
            flag: SweepFlag::Ok,
        },
        Err(Error::NoPropagatingChannel { .. }) => SweepRecord {
            energy,
            transmission: 0.0,
            reflection: 1.0,
            flag: SweepFlag::SubThreshold,
        },
        Err(_) => SweepRecord {
            energy,
            transmission: f64::NAN,
            reflection: f64::NAN,
            flag: SweepFlag::Degenerate,
        },
    }
}

/// Solves every energy of a strictly increasing grid. Per-point failures
/// become flagged records; output order follows the grid.
pub fn transmission_sweep(scenario: &ScatteringScenario, energies: &[f64]) -> Result<Vec<SweepRecord>> {
    if energies.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("energy grid must be strictly increasing".into()));
    }
    if energies.iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidInput("energy grid must be finite".into()));
    }
    Ok(energies.par_iter().map(|&e| sweep_point(e, scenario)).collect())
}

/// First energy of a sweep at which the section transmits at least `level`.
pub fn transmission_onset(records: &[SweepRecord], level: f64) -> Option<f64> {
    records
        .iter()
        .find(|r| r.flag == SweepFlag::Ok && r.transmission >= level)
        .map(|r| r.energy)
}

/// Energy at which the wavevector inside the section satisfies `k2 L = n pi`.
pub fn predicted_resonance(n: u32, scenario: &ScatteringScenario) -> f64 {
    let k2 = n as f64 * std::f64::consts::PI / scenario.geom.length;
    scenario.region_threshold() + scenario.phys.kinetic_scale() * k2 * k2
}

/// Locates the zero of the reflection amplitude in `[center - half_width,
/// center + half_width]` by golden-section search on `|r|`.
pub fn locate_resonance(scenario: &ScatteringScenario, center: f64, half_width: f64) -> Result<f64> {
    let objective = |e: f64| solve_scattering(e, scenario).map(|s| s.r.norm());
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (center - half_width, center + half_width);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = objective(x1)?;
    let mut f2 = objective(x2)?;
    for _ in 0..200 {
        if hi - lo <= 1e-13 * center.abs().max(1.0) {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2)?;
        }
    }
    Ok(0.5 * (lo + hi))
}
