//! Built-in cross-check suite.
//!
//! Each check compares an analytic result against an independent numerical
//! route (finite-difference spectra, direct ODE integration, finite-difference
//! embeddings) or verifies a structural property, and reports the worst
//! deviation it measured against a fixed tolerance. Everything is seeded, so
//! repeated runs produce identical reports.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::{
    curvatures_from_forms, da_costa_potential, metric_from_embedding_fd, surface_curvatures,
    twisted_metric, CylinderGeometry, PhysicsParams, TwistProfile,
};
use crate::numeric::fd::{fd_bound_spectrum, FDGrid, FdOperator};
use crate::numeric::ode::{ode_transmission_oracle, StepControl};
use crate::scattering::{
    locate_resonance, predicted_resonance, solve_scattering, transmission_onset,
    transmission_sweep, ScatteringScenario, SweepFlag,
};
use crate::spectrum::{
    assert_no_subthreshold_states, bound_wavefunction, eigenenergy, twist_phase_between,
    GridSpec, ModeNumbers,
};

pub const FD_POINTS: usize = 2000;
pub const SPECTRUM_REL_TOL: f64 = 1e-6;
pub const PHASE_TOL: f64 = 1e-4;
pub const DENSITY_TOL: f64 = 1e-14;
pub const NORM_TOL: f64 = 1e-6;
pub const UNITARITY_TOL: f64 = 1e-10;
pub const TRANSPARENCY_TOL: f64 = 1e-10;
pub const RESONANCE_T_TOL: f64 = 1e-8;
pub const RESONANCE_POSITION_TOL: f64 = 1e-6;
pub const CROSS_ORACLE_TOL: f64 = 1e-8;
pub const DET_TOL: f64 = 1e-14;
pub const EMBEDDING_TOL: f64 = 1e-6;
pub const CURVATURE_TOL: f64 = 1e-14;
pub const CROSS_ORACLE_SEED: u64 = 0x7715_7ed0;
pub const CROSS_ORACLE_TUPLES: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// Worst measured deviation (or other figure of merit) in units of `tolerance`.
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckOutcome {
    fn from_parts(id: u32, name: &'static str, parts: &[(&str, f64, f64)], extra: &[(&str, bool)]) -> Self {
        let mut passed = true;
        let mut worst = 0.0f64;
        let mut detail = Vec::new();
        for &(label, measured, tol) in parts {
            let ok = measured <= tol;
            passed &= ok;
            worst = worst.max(measured / tol);
            detail.push(format!("{label}={measured:.3e}/{tol:.0e}"));
        }
        for &(label, ok) in extra {
            passed &= ok;
            detail.push(format!("{label}={}", if ok { "yes" } else { "NO" }));
        }
        Self {
            id,
            name,
            passed,
            measured: worst,
            tolerance: 1.0,
            detail: detail.join(" "),
        }
    }

    fn failed(id: u32, name: &'static str, err: crate::Error) -> Self {
        Self {
            id,
            name,
            passed: false,
            measured: f64::INFINITY,
            tolerance: 1.0,
            detail: format!("numerical failure: {err}"),
        }
    }
}

fn wrap(id: u32, name: &'static str, body: impl FnOnce() -> Result<CheckOutcome>) -> CheckOutcome {
    body().unwrap_or_else(|e| CheckOutcome::failed(id, name, e))
}

fn geom(r: f64, l: f64) -> CylinderGeometry {
    CylinderGeometry { radius: r, length: l }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// FD oracle (N and 2N with Richardson) against the closed-form spectrum.
pub fn check_spectrum_correctness() -> CheckOutcome {
    const NAME: &str = "spectrum: FD oracle vs closed form";
    wrap(1, NAME, || {
        let phys = PhysicsParams::natural();
        let twist = TwistProfile::Constant(0.5);
        let mut worst = 0.0f64;
        for r in [0.5, 1.0, 2.0] {
            for len in [1.0, 5.0] {
                let g = geom(r, len);
                for l in -2..=2 {
                    let s = fd_bound_spectrum(l, &g, &twist, &phys, FDGrid::new(FD_POINTS, len)?, 3)?;
                    for (i, e) in s.energies().iter().enumerate() {
                        let exact = eigenenergy(ModeNumbers::new(i as u32 + 1, l)?, &g, &phys);
                        worst = worst.max(rel(*e, exact));
                    }
                }
            }
        }
        Ok(CheckOutcome::from_parts(1, NAME, &[("max_rel_err", worst, SPECTRUM_REL_TOL)], &[]))
    })
}

fn invariance_twists() -> Vec<(&'static str, TwistProfile)> {
    vec![
        ("alpha=0", TwistProfile::Constant(0.0)),
        ("alpha=0.5", TwistProfile::Constant(0.5)),
        ("alpha=1", TwistProfile::Constant(1.0)),
        ("alpha(z)=0.3z", TwistProfile::LinearRamp(0.3)),
    ]
}

/// Largest deviation of `arg(Z_i) - l theta(z_i)` from a constant (mod pi)
/// over nodes where the eigenvector is not negligible.
pub fn eigenvector_phase_deviation(
    l: i32,
    g: &CylinderGeometry,
    twist: &TwistProfile,
    phys: &PhysicsParams,
    grid: FDGrid,
    n: u32,
) -> Result<f64> {
    let op = FdOperator::assemble(l, g, twist, phys, grid);
    let seed = eigenenergy(ModeNumbers::new(n, l)?, g, phys);
    let (_, vec) = op.eigenpair_near(seed)?;
    let mut theta = 0.0;
    let mut prev_z = 0.0;
    let mut gauged = Vec::with_capacity(vec.len());
    for (i, z) in vec.iter().enumerate() {
        let zi = grid.node(i);
        theta += twist_phase_between(twist, l, prev_z, zi, 1e-12)?;
        prev_z = zi;
        gauged.push(z * Complex64::from_polar(1.0, -theta));
    }
    let peak = gauged.iter().fold(Complex64::new(0.0, 0.0), |b, v| if v.norm() > b.norm() { *v } else { b });
    let reference = peak.arg();
    let cutoff = 1e-3 * peak.norm();
    let mut worst = 0.0f64;
    for v in gauged.iter().filter(|v| v.norm() > cutoff) {
        let mut d = v.arg() - reference;
        // real amplitude up to sign: compare modulo pi
        d = (d + PI / 2.0).rem_euclid(PI) - PI / 2.0;
        worst = worst.max(d.abs());
    }
    Ok(worst)
}

/// FD spectra with and without twist coincide; FD eigenvectors carry the
/// geometric phase.
pub fn check_twist_invariance() -> CheckOutcome {
    const NAME: &str = "twist invariance of energies and phase";
    wrap(2, NAME, || {
        let phys = PhysicsParams::natural();
        let mut worst_energy = 0.0f64;
        let mut worst_phase = 0.0f64;
        let twists = invariance_twists();
        for (r, len) in [(1.0, 1.0), (1.0, 2.0)] {
            let g = geom(r, len);
            let grid = FDGrid::new(FD_POINTS, len)?;
            for l in -2..=2 {
                let spectra = twists
                    .iter()
                    .map(|(_, t)| fd_bound_spectrum(l, &g, t, &phys, grid, 3).map(|s| s.energies()))
                    .collect::<Result<Vec<_>>>()?;
                for a in 0..spectra.len() {
                    for b in a + 1..spectra.len() {
                        for (x, y) in spectra[a].iter().zip(&spectra[b]) {
                            worst_energy = worst_energy.max(rel(*x, *y));
                        }
                    }
                }
                for (_, t) in &twists {
                    for n in 1..=3 {
                        worst_phase = worst_phase.max(eigenvector_phase_deviation(l, &g, t, &phys, grid, n)?);
                    }
                }
            }
        }
        Ok(CheckOutcome::from_parts(
            2,
            NAME,
            &[
                ("max_pairwise_rel", worst_energy, SPECTRUM_REL_TOL),
                ("max_phase_dev", worst_phase, PHASE_TOL),
            ],
            &[],
        ))
    })
}

/// `|psi|^2` identical across twists; normalisation on a 400x400 grid.
pub fn check_density_invariance() -> CheckOutcome {
    const NAME: &str = "probability density twist independence";
    wrap(3, NAME, || {
        let g = geom(1.0, 2.0);
        let grid = GridSpec {
            phi_points: 400,
            z_points: 400,
        };
        let twists = invariance_twists();
        let mut worst_density = 0.0f64;
        let mut worst_norm = 0.0f64;
        for n in 1..=3 {
            for l in -2..=2 {
                let mode = ModeNumbers::new(n, l)?;
                let reference = bound_wavefunction(mode, &g, &twists[0].1, grid)?;
                let ref_density = reference.density();
                worst_norm = worst_norm.max((reference.norm() - 1.0).abs());
                for (_, t) in &twists[1..] {
                    let psi = bound_wavefunction(mode, &g, t, grid)?;
                    worst_norm = worst_norm.max((psi.norm() - 1.0).abs());
                    for (a, b) in psi.density().iter().zip(&ref_density) {
                        worst_density = worst_density.max((a - b).abs());
                    }
                }
            }
        }
        Ok(CheckOutcome::from_parts(
            3,
            NAME,
            &[
                ("max_density_diff", worst_density, DENSITY_TOL),
                ("max_norm_err", worst_norm, NORM_TOL),
            ],
            &[],
        ))
    })
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

/// Embedded section: perfect transmission above threshold; onset ordering.
pub fn check_embedded_transparency() -> CheckOutcome {
    const NAME: &str = "embedded section transparency";
    wrap(4, NAME, || {
        let phys = PhysicsParams::natural();
        let mut worst = 0.0f64;
        let mut solved = 0usize;
        for alpha in [0.0, 0.5, 1.0, 2.0] {
            for l in 0..=2 {
                let s = ScatteringScenario::embedded(geom(1.0, 1.0), alpha, l, phys);
                let thr = s.outside_threshold();
                for e in linspace(thr + 0.01, thr + 5.0, 200) {
                    let sol = solve_scattering(e, &s)?;
                    worst = worst.max((sol.transmission - 1.0).abs()).max(sol.reflection);
                    solved += 1;
                }
            }
        }
        let grid = linspace(-1.0, 5.0, 6001);
        let onset = |r: f64, l: i32| -> Result<Option<f64>> {
            let s = ScatteringScenario::embedded(geom(r, 1.0), 0.5, l, phys);
            Ok(transmission_onset(&transmission_sweep(&s, &grid)?, 0.5))
        };
        let by_l: Option<Vec<f64>> = (0..=2).map(|l| onset(1.0, l)).collect::<Result<_>>()?;
        let by_r: Option<Vec<f64>> = [0.5, 1.0, 2.0].iter().map(|&r| onset(r, 1)).collect::<Result<_>>()?;
        let l_ok = by_l.as_deref().is_some_and(strictly_increasing);
        let r_ok = by_r.is_some_and(|mut v| {
            v.reverse();
            strictly_increasing(&v)
        });
        Ok(CheckOutcome::from_parts(
            4,
            NAME,
            &[("max_|T-1|,R", worst, TRANSPARENCY_TOL)],
            &[
                ("2400_points_solved", solved == 2400),
                ("onset_up_with_l", l_ok),
                ("onset_down_with_R", r_ok),
            ],
        ))
    })
}

/// Free-particle scattering: unitarity, twist independence, resonances and
/// oscillation above the barrier.
pub fn check_free_scattering() -> CheckOutcome {
    const NAME: &str = "free-particle scattering";
    wrap(5, NAME, || {
        let phys = PhysicsParams::natural();
        let mut unitarity = 0.0f64;
        let mut alpha_spread = 0.0f64;
        let mut resonance_t = 0.0f64;
        let mut resonance_pos = 0.0f64;
        let mut oscillates = true;
        for (l, r, len) in [(0, 1.0, 1.0), (1, 1.0, 1.0), (1, 0.5, 2.0), (2, 1.0, 2.0)] {
            let g = geom(r, len);
            let base = ScatteringScenario::free(g, 0.0, l, phys);
            let top = predicted_resonance(6, &base);
            let grid = linspace(0.01, top, 400);
            let reference = transmission_sweep(&base, &grid)?;
            for alpha in [0.0, 0.5, 1.0] {
                let s = ScatteringScenario::free(g, alpha, l, phys);
                let rows = transmission_sweep(&s, &grid)?;
                for (a, b) in rows.iter().zip(&reference) {
                    if a.flag != b.flag {
                        alpha_spread = f64::INFINITY;
                    } else if a.flag == SweepFlag::Ok {
                        unitarity = unitarity.max((a.transmission + a.reflection - 1.0).abs());
                        alpha_spread = alpha_spread.max((a.transmission - b.transmission).abs());
                    }
                }
            }
            let s = ScatteringScenario::free(g, 0.5, l, phys);
            let mut peaks = Vec::new();
            for n in 1..=5 {
                let predicted = predicted_resonance(n, &s);
                let t = solve_scattering(predicted, &s)?.transmission;
                resonance_t = resonance_t.max((t - 1.0).abs());
                let spacing = predicted_resonance(n + 1, &s) - predicted;
                let found = locate_resonance(&s, predicted, 0.2 * spacing)?;
                resonance_pos = resonance_pos.max((found - predicted).abs());
                peaks.push(predicted);
            }
            for w in peaks.windows(2) {
                let mid = solve_scattering(0.5 * (w[0] + w[1]), &s)?.transmission;
                oscillates &= mid < 1.0 - 1e-9;
            }
        }
        Ok(CheckOutcome::from_parts(
            5,
            NAME,
            &[
                ("max_|T+R-1|", unitarity, UNITARITY_TOL),
                ("max_alpha_spread", alpha_spread, UNITARITY_TOL),
                ("max_|T_res-1|", resonance_t, RESONANCE_T_TOL),
                ("max_res_shift", resonance_pos, RESONANCE_POSITION_TOL),
            ],
            &[("dips_between_resonances", oscillates)],
        ))
    })
}

/// A randomized scattering configuration, shared with the cross-oracle check.
#[derive(Debug, Clone, Copy)]
pub struct OracleTuple {
    pub scenario: ScatteringScenario,
    pub energy: f64,
}

pub fn cross_oracle_tuples(count: usize, seed: u64) -> Vec<OracleTuple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phys = PhysicsParams::natural();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let l: i32 = rng.gen_range(-2..=2);
        let r: f64 = rng.gen_range(0.5..2.0);
        let len: f64 = rng.gen_range(0.5..3.0);
        let alpha: f64 = rng.gen_range(0.0..2.0);
        let g = geom(r, len);
        let scenario = if out.len() % 4 == 3 {
            ScatteringScenario::embedded(g, alpha, l, phys)
        } else {
            ScatteringScenario::free(g, alpha, l, phys)
        };
        let energy = scenario.outside_threshold() + rng.gen_range(0.05..20.0);
        if (energy - scenario.region_threshold()).abs() < 1e-3 {
            continue;
        }
        out.push(OracleTuple { scenario, energy });
    }
    out
}

/// Closed-form 4x4 solution against backward ODE integration.
pub fn check_cross_oracle() -> CheckOutcome {
    const NAME: &str = "closed form vs ODE integration";
    wrap(6, NAME, || {
        let mut worst = 0.0f64;
        for tuple in cross_oracle_tuples(CROSS_ORACLE_TUPLES, CROSS_ORACLE_SEED) {
            let closed = solve_scattering(tuple.energy, &tuple.scenario)?;
            let (t, r) = ode_transmission_oracle(tuple.energy, &tuple.scenario, &StepControl::default())?;
            worst = worst
                .max((t - closed.transmission).abs())
                .max((r - closed.reflection).abs());
        }
        Ok(CheckOutcome::from_parts(6, NAME, &[("max_|dT|,|dR|", worst, CROSS_ORACLE_TOL)], &[]))
    })
}

/// Metric determinant, FD embedding, curvatures and potential.
pub fn check_geometry_layer() -> CheckOutcome {
    const NAME: &str = "geometry layer";
    wrap(7, NAME, || {
        let phys = PhysicsParams::natural();
        // dyadic samples are exactly representable, so the cancellation is exact
        let mut det_exact = 0.0f64;
        for i in 1..=80 {
            let r = i as f64 / 8.0;
            for j in -80..=80 {
                let f = j as f64 / 8.0;
                let g = twisted_metric(&geom(r, 1.0), f);
                det_exact = det_exact.max(rel(g.det(), r * r));
            }
        }
        // generic samples: deviation relative to the magnitude of the cancelling products
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut det_generic = 0.0f64;
        for _ in 0..2000 {
            let r: f64 = rng.gen_range(1e-3..=10.0);
            let f: f64 = rng.gen_range(-10.0..=10.0);
            let g = twisted_metric(&geom(r, 1.0), f);
            det_generic = det_generic.max((g.det() - r * r).abs() / (g.pp * g.zz));
        }

        let mut embed = 0.0f64;
        let profiles = [
            TwistProfile::Constant(0.5),
            TwistProfile::Constant(-1.3),
            TwistProfile::LinearRamp(0.3),
            TwistProfile::profiled(|z| 0.2 * z.sin(), |z| 0.2 * z.cos()),
        ];
        for r in [0.5, 1.0, 2.0] {
            let g = geom(r, 3.0);
            for twist in &profiles {
                for &(phi, z) in &[(0.0, 0.0), (1.0, 0.5), (2.5, 1.7), (5.0, 3.0)] {
                    let fd = metric_from_embedding_fd(&g, twist, (phi, z), 1e-5)?;
                    let exact = twisted_metric(&g, twist.f(z));
                    embed = embed
                        .max((fd.pp - exact.pp).abs())
                        .max((fd.pz - exact.pz).abs())
                        .max((fd.zz - exact.zz).abs());
                }
            }
        }

        let mut curv = 0.0f64;
        for r in [0.3, 1.0, 2.0, 7.5] {
            let g = geom(r, 1.0);
            let v_expected = -phys.hbar * phys.hbar / (8.0 * phys.mass * r * r);
            for f in [0.0, 0.5, -2.0, 7.0] {
                let c = surface_curvatures(&g, f);
                curv = curv
                    .max(c.gaussian.abs())
                    .max(rel(c.mean, 0.5 / r))
                    .max(rel(da_costa_potential(&c, &phys), v_expected));
                let (m, k) = curvatures_from_forms(&twisted_metric(&g, f), &c.second_form)?;
                let scale = 1.0 + r * r * f * f;
                curv = curv.max(rel(m, 0.5 / r) / scale).max(k.abs() / scale);
            }
        }
        Ok(CheckOutcome::from_parts(
            7,
            NAME,
            &[
                ("det_rel_err_dyadic", det_exact, DET_TOL),
                ("det_err_generic", det_generic, DET_TOL),
                ("embedding_err", embed, EMBEDDING_TOL),
                ("curvature_err", curv, CURVATURE_TOL),
            ],
            &[],
        ))
    })
}

/// No FD eigenvalue at or below `V_eff*`.
pub fn check_no_subthreshold_states() -> CheckOutcome {
    const NAME: &str = "no bound states at or below V_eff*";
    wrap(8, NAME, || {
        let phys = PhysicsParams::natural();
        let mut all_ok = true;
        let mut min_gap = f64::INFINITY;
        let mut configs = 0;
        for r in [0.5, 1.0, 2.0] {
            for len in [1.0, 5.0] {
                let g = geom(r, len);
                for l in -2..=2 {
                    for (_, twist) in invariance_twists() {
                        let s = fd_bound_spectrum(l, &g, &twist, &phys, FDGrid::new(FD_POINTS, len)?, 3)?;
                        let guard = assert_no_subthreshold_states(ModeNumbers::new(1, l)?, &g, &phys);
                        let mut levels = s.energies();
                        levels.push(s.lowest_unseeded.re);
                        all_ok &= guard.check(&levels).is_ok();
                        min_gap = min_gap.min(s.lowest_unseeded.re - guard.threshold);
                        configs += 1;
                    }
                }
            }
        }
        let mut out = CheckOutcome::from_parts(8, NAME, &[], &[("all_above_threshold", all_ok)]);
        out.detail = format!("{} configs={configs} min_gap={min_gap:.6e}", out.detail);
        Ok(out)
    })
}

/// Runs checks 1 through 8 in order.
pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        check_spectrum_correctness(),
        check_twist_invariance(),
        check_density_invariance(),
        check_embedded_transparency(),
        check_free_scattering(),
        check_cross_oracle(),
        check_geometry_layer(),
        check_no_subthreshold_states(),
    ]
}
