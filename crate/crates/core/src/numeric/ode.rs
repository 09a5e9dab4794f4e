//! Direct-integration transmission oracle.
//!
//! Integrates the full complex longitudinal equation (first-derivative term
//! included) backward through the twisted section, starting from a pure
//! transmitted wave at `z = L`, then decomposes the result into incident and
//! reflected plane waves at `z = 0`. No closed-form region solution is used.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{da_costa_potential, surface_curvatures, TwistProfile};
use crate::scattering::{outside_wavevector, ScatteringScenario};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    /// Local error tolerance per step, relative to `max(1, |y|)`.
    pub tol: f64,
    pub initial_step: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            initial_step: 1e-3,
            max_steps: 1_000_000,
        }
    }
}

type State = [Complex64; 2];

fn axpy(y: &State, h: f64, k: &State) -> State {
    [y[0] + k[0] * h, y[1] + k[1] * h]
}

fn rk4<F: Fn(f64, &State) -> State>(rhs: &F, z: f64, y: &State, h: f64) -> State {
    let k1 = rhs(z, y);
    let k2 = rhs(z + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = rhs(z + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = rhs(z + h, &axpy(y, h, &k3));
    [
        y[0] + (k1[0] + k2[0] * 2.0 + k3[0] * 2.0 + k4[0]) * (h / 6.0),
        y[1] + (k1[1] + k2[1] * 2.0 + k3[1] * 2.0 + k4[1]) * (h / 6.0),
    ]
}

/// Classical RK4 with step doubling; integrates `y' = rhs(z, y)` from `z0`
/// to `z1` (either direction).
pub fn integrate_rk4_adaptive<F: Fn(f64, &State) -> State>(
    rhs: F,
    z0: f64,
    z1: f64,
    y0: State,
    control: &StepControl,
) -> Result<State> {
    let span = z1 - z0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut h = control.initial_step.abs().min(span.abs()) * dir;
    let mut z = z0;
    let mut y = y0;
    let min_step = 1e-14 * span.abs().max(1.0);

    for _ in 0..control.max_steps {
        if (z1 - z) * dir <= 0.0 {
            return Ok(y);
        }
        if (z + h - z1) * dir > 0.0 {
            h = z1 - z;
        }
        let big = rk4(&rhs, z, &y, h);
        let half = rk4(&rhs, z, &y, 0.5 * h);
        let small = rk4(&rhs, z + 0.5 * h, &half, 0.5 * h);
        let scale = y[0].norm().max(y[1].norm()).max(1.0);
        let err = (0..2)
            .map(|c| (small[c] - big[c]).norm())
            .fold(0.0, f64::max)
            / (15.0 * scale);
        if !err.is_finite() {
            return Err(Error::IntegratorFailure(format!("non-finite state at z = {z}")));
        }
        if err <= control.tol {
            z = if (z + h - z1) * dir >= 0.0 { z1 } else { z + h };
            // local extrapolation
            y = [
                small[0] + (small[0] - big[0]) / 15.0,
                small[1] + (small[1] - big[1]) / 15.0,
            ];
        }
        let factor = if err == 0.0 {
            4.0
        } else {
            (0.9 * (control.tol / err).powf(0.2)).clamp(0.1, 4.0)
        };
        h *= factor;
        if h.abs() < min_step {
            return Err(Error::IntegratorFailure(format!("step size underflow at z = {z}")));
        }
    }
    Err(Error::IntegratorFailure(format!(
        "exceeded {} steps",
        control.max_steps
    )))
}

/// Transmission and reflection probabilities by direct integration.
pub fn ode_transmission_oracle(
    energy: f64,
    scenario: &ScatteringScenario,
    control: &StepControl,
) -> Result<(f64, f64)> {
    let k = outside_wavevector(energy, scenario)?;
    let twist = TwistProfile::Constant(scenario.alpha);
    let geom = scenario.geom;
    let phys = scenario.phys;
    let c = phys.kinetic_scale();
    let lf = scenario.l as f64;
    let inv_r2 = 1.0 / (geom.radius * geom.radius);
    let i = Complex64::i();

    // Z'' = 2 i l f Z' + (1/c) (W - e) Z
    let rhs = |z: f64, y: &State| -> State {
        let f = twist.f(z);
        let v_g = da_costa_potential(&surface_curvatures(&geom, f), &phys);
        let w = Complex64::new(v_g + c * (f * f + inv_r2) * lf * lf - energy, c * lf * twist.f_prime(z));
        [y[1], i * (2.0 * lf * f) * y[1] + w / c * y[0]]
    };

    let len = geom.length;
    let ik = i * k;
    let wave = (ik * len).exp();
    // transmitted amplitude 1; current matching fixes Z'_II(L) = Z'_III(L) + i l f Z(L)
    let y_end = [wave, (ik + i * (lf * twist.f(len))) * wave];
    let y0 = integrate_rk4_adaptive(rhs, len, 0.0, y_end, control)?;

    let z0 = y0[0];
    let zp0 = y0[1] - i * (lf * twist.f(0.0)) * y0[0];
    let incident = 0.5 * (z0 + zp0 / ik);
    let reflected = 0.5 * (z0 - zp0 / ik);
    if incident.norm() == 0.0 {
        return Err(Error::IntegratorFailure("vanishing incident amplitude".into()));
    }
    let transmission = 1.0 / incident.norm_sqr();
    let reflection = (reflected / incident).norm_sqr();
    Ok((transmission, reflection))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CylinderGeometry, PhysicsParams};
    use crate::scattering::solve_scattering;
    use std::f64::consts::PI;

    #[test]
    fn harmonic_oscillator_step() {
        // y'' = -y, y(0) = 1, y'(0) = 0 -> y(pi) = -1
        let rhs = |_z: f64, y: &State| [y[1], -y[0]];
        let y = integrate_rk4_adaptive(
            rhs,
            0.0,
            PI,
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            &StepControl::default(),
        )
        .unwrap();
        assert!((y[0] + 1.0).norm() < 1e-9);
        assert!(y[1].norm() < 1e-9);
    }

    #[test]
    fn embedded_is_transparent() {
        let geom = CylinderGeometry::new(1.0, 1.0).unwrap();
        let s = ScatteringScenario::embedded(geom, 1.1, 2, PhysicsParams::natural());
        let (t, r) = ode_transmission_oracle(3.0, &s, &StepControl::default()).unwrap();
        assert!((t - 1.0).abs() < 1e-8);
        assert!(r < 1e-8);
    }

    #[test]
    fn free_resonance_and_agreement() {
        let geom = CylinderGeometry::new(1.0, 1.0).unwrap();
        let s = ScatteringScenario::free(geom, 0.6, 0, PhysicsParams::natural());
        let (t, _) = ode_transmission_oracle(PI * PI / 2.0 - 0.125, &s, &StepControl::default()).unwrap();
        assert!((t - 1.0).abs() < 1e-7);
        let (t, r) = ode_transmission_oracle(2.0, &s, &StepControl::default()).unwrap();
        let closed = solve_scattering(2.0, &s).unwrap();
        assert!(t < 1.0);
        assert!((t - closed.transmission).abs() < 1e-8, "{t} vs {}", closed.transmission);
        assert!((r - closed.reflection).abs() < 1e-8);
    }

    #[test]
    fn subthreshold_is_rejected() {
        let geom = CylinderGeometry::new(1.0, 1.0).unwrap();
        let s = ScatteringScenario::free(geom, 0.6, 0, PhysicsParams::natural());
        assert!(ode_transmission_oracle(-0.5, &s, &StepControl::default()).is_err());
    }
}
