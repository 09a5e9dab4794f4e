//! Cross-checks between the closed-form results and the numerical oracles.

use std::f64::consts::PI;

use twistqm::geometry::{CylinderGeometry, PhysicsParams, TwistProfile};
use twistqm::numeric::fd::{fd_bound_spectrum, FDGrid, FdOperator};
use twistqm::numeric::ode::{ode_transmission_oracle, StepControl};
use twistqm::scattering::{
    predicted_resonance, solve_scattering, transmission_onset, transmission_sweep,
    ScatteringScenario, SweepFlag,
};
use twistqm::spectrum::{assert_no_subthreshold_states, eigenenergy, ModeNumbers};
use twistqm::validation::{cross_oracle_tuples, eigenvector_phase_deviation};

fn geom(r: f64, l: f64) -> CylinderGeometry {
    CylinderGeometry::new(r, l).unwrap()
}

fn fd_levels(l: i32, g: &CylinderGeometry, twist: &TwistProfile) -> Vec<f64> {
    fd_bound_spectrum(l, g, twist, &PhysicsParams::natural(), FDGrid::new(2000, g.length).unwrap(), 3)
        .unwrap()
        .energies()
}

#[test]
fn fd_ground_state_matches_closed_form() {
    let levels = fd_levels(0, &geom(1.0, 1.0), &TwistProfile::Constant(0.0));
    let exact = PI * PI / 2.0 - 0.125;
    assert!(((levels[0] - exact) / exact).abs() < 1e-6);
    assert!((levels[0] - 4.80980).abs() < 1e-5);
}

#[test]
fn fd_levels_do_not_depend_on_twist() {
    let g = geom(1.0, 1.0);
    let flat = fd_levels(1, &g, &TwistProfile::Constant(0.0));
    let twisted = fd_levels(1, &g, &TwistProfile::Constant(0.7));
    let ramp = fd_levels(1, &g, &TwistProfile::profiled(|z| 0.3 * z, |_| 0.3));
    for i in 0..3 {
        assert!(((twisted[i] - flat[i]) / flat[i]).abs() < 1e-6);
        assert!(((ramp[i] - flat[i]) / flat[i]).abs() < 1e-6);
    }
}

#[test]
fn fd_eigenvalues_are_real() {
    let g = geom(1.0, 2.0);
    let s = fd_bound_spectrum(
        2,
        &g,
        &TwistProfile::LinearRamp(0.3),
        &PhysicsParams::natural(),
        FDGrid::new(2000, 2.0).unwrap(),
        3,
    )
    .unwrap();
    assert!(s.max_imag() < 1e-9, "imag {}", s.max_imag());
}

#[test]
fn fd_eigenvector_carries_geometric_phase() {
    let g = geom(1.0, 1.0);
    let grid = FDGrid::new(2000, 1.0).unwrap();
    let phys = PhysicsParams::natural();
    for twist in [TwistProfile::Constant(0.8), TwistProfile::LinearRamp(0.3)] {
        let dev = eigenvector_phase_deviation(2, &g, &twist, &phys, grid, 1).unwrap();
        assert!(dev < 1e-4, "{twist:?}: {dev}");
    }
    // without the gauge factor the phase winds by l * alpha * L = 1.6 rad
    let op = FdOperator::assemble(2, &g, &TwistProfile::Constant(0.8), &phys, grid);
    let (_, v) = op.eigenpair_near(eigenenergy(ModeNumbers::new(1, 2).unwrap(), &g, &phys)).unwrap();
    let wind = (v[v.len() - 1] / v[0]).arg();
    assert!((wind - 1.6).abs() < 1e-2, "wind {wind}");
}

#[test]
fn fd_spectrum_stays_above_gauge_potential() {
    for (l, r) in [(0, 1.0), (1, 1.0), (2, 0.5)] {
        let g = geom(r, 1.0);
        let s = fd_bound_spectrum(l, &g, &TwistProfile::Constant(1.0), &PhysicsParams::natural(), FDGrid::new(500, 1.0).unwrap(), 2)
            .unwrap();
        let guard = assert_no_subthreshold_states(ModeNumbers::new(1, l).unwrap(), &g, &PhysicsParams::natural());
        assert!(guard.check(&[s.lowest_unseeded.re]).is_ok());
        assert!(guard.check(&s.energies()).is_ok());
    }
}

#[test]
fn ode_oracle_agrees_on_random_tuples() {
    for tuple in cross_oracle_tuples(20, 42) {
        let closed = solve_scattering(tuple.energy, &tuple.scenario).unwrap();
        let (t, r) = ode_transmission_oracle(tuple.energy, &tuple.scenario, &StepControl::default()).unwrap();
        assert!((t - closed.transmission).abs() < 1e-8, "{tuple:?}");
        assert!((r - closed.reflection).abs() < 1e-8, "{tuple:?}");
    }
}

#[test]
fn free_resonances_transmit_fully() {
    let s = ScatteringScenario::free(geom(1.0, 1.0), 0.9, 0, PhysicsParams::natural());
    for n in 1..=5 {
        let e = predicted_resonance(n, &s);
        let closed = solve_scattering(e, &s).unwrap();
        assert!((closed.transmission - 1.0).abs() < 1e-8);
        let (t, _) = ode_transmission_oracle(e, &s, &StepControl::default()).unwrap();
        assert!((t - 1.0).abs() < 1e-7);
    }
}

#[test]
fn embedded_curves_are_identical_step_functions() {
    let grid: Vec<f64> = (1..=500).map(|i| 0.01 * i as f64).collect();
    let curves: Vec<Vec<f64>> = [0.0, 0.5, 1.0]
        .iter()
        .map(|&a| {
            let s = ScatteringScenario::embedded(geom(1.0, 1.0), a, 1, PhysicsParams::natural());
            transmission_sweep(&s, &grid).unwrap().iter().map(|r| r.transmission).collect()
        })
        .collect();
    for c in &curves[1..] {
        for (a, b) in c.iter().zip(&curves[0]) {
            assert!((a.is_nan() && b.is_nan()) || (a - b).abs() < 1e-10);
        }
    }
    // step: 0 below threshold, 1 above
    assert!(curves[0].iter().all(|t| t.is_nan() || *t == 0.0 || (t - 1.0).abs() < 1e-10));
}

#[test]
fn embedded_onset_grows_with_l() {
    let grid: Vec<f64> = (1..=500).map(|i| 0.01 * i as f64).collect();
    let onsets: Vec<f64> = (0..=2)
        .map(|l| {
            let s = ScatteringScenario::embedded(geom(1.0, 1.0), 0.4, l, PhysicsParams::natural());
            transmission_onset(&transmission_sweep(&s, &grid).unwrap(), 0.5).unwrap()
        })
        .collect();
    assert!(onsets[0] < onsets[1] && onsets[1] < onsets[2], "{onsets:?}");
}

#[test]
fn free_onset_drops_with_radius_and_oscillates() {
    let grid: Vec<f64> = (1..=3000).map(|i| 0.0031 + 0.005 * i as f64).collect();
    let mut onsets = Vec::new();
    for r in [0.5, 1.0, 2.0] {
        let s = ScatteringScenario::free(geom(r, 2.0), 0.5, 1, PhysicsParams::natural());
        let rows = transmission_sweep(&s, &grid).unwrap();
        assert!(rows.iter().all(|row| row.flag == SweepFlag::Ok));
        onsets.push(transmission_onset(&rows, 0.5).unwrap());
        // local maxima above the barrier
        let above: Vec<f64> = rows
            .iter()
            .filter(|row| row.energy > s.region_threshold())
            .map(|row| row.transmission)
            .collect();
        let peaks = above.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2]).count();
        assert!(peaks >= 2, "R={r}: {peaks} peaks");
    }
    assert!(onsets[0] > onsets[1] && onsets[1] > onsets[2], "{onsets:?}");
}
