//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_DEPTH: u32 = 40;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn refine<F: Fn(f64) -> f64>(f: &F, p: Panel, tol: f64, depth: u32) -> Option<f64> {
    let m = 0.5 * (p.a + p.b);
    let lm = 0.5 * (p.a + m);
    let rm = 0.5 * (m + p.b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(p.a, m, p.fa, flm, p.fm);
    let right = simpson(m, p.b, p.fm, frm, p.fb);
    let delta = left + right - p.whole;
    if !delta.is_finite() {
        return None;
    }
    // rounding floor: below this the estimate is noise
    let floor = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if delta.abs() <= (15.0 * tol).max(floor) {
        return Some(left + right + delta / 15.0);
    }
    if depth == 0 {
        return None;
    }
    let l = refine(
        f,
        Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
        },
        0.5 * tol,
        depth - 1,
    )?;
    let r = refine(
        f,
        Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
        },
        0.5 * tol,
        depth - 1,
    )?;
    Some(l + r)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Reversed limits give the negated integral.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput("integration limits must be finite".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate_adaptive(f, b, a, tol).map(|v| -v);
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(a, b, fa, fm, fb);
    let panel = Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole,
    };
    match refine(&f, panel, tol, MAX_DEPTH) {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(Error::QuadratureFailure {
            a,
            b,
            max_depth: MAX_DEPTH,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn basic_integrals() {
        let v = integrate_adaptive(|x| x, 0.0, 1.0, 1e-10).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        let v = integrate_adaptive(f64::sin, 0.0, PI, 1e-10).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
        let v = integrate_adaptive(|x| 0.6 * x, 0.0, 2.0, 1e-10).unwrap();
        assert!((v - 1.2).abs() < 1e-12);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        let v = integrate_adaptive(|x| x * x, 1.0, 0.0, 1e-10).unwrap();
        assert!((v + 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(integrate_adaptive(|x| x, 2.0, 2.0, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn oscillatory_integrand() {
        // int_0^10 cos(5x) dx = sin(50)/5
        let v = integrate_adaptive(|x| (5.0 * x).cos(), 0.0, 10.0, 1e-10).unwrap();
        assert!((v - 50f64.sin() / 5.0).abs() < 1e-9);
    }

    #[test]
    fn non_convergence_is_reported() {
        let res = integrate_adaptive(|x| if x > 0.3 { f64::NAN } else { 1.0 }, 0.0, 1.0, 1e-10);
        assert!(matches!(res, Err(Error::QuadratureFailure { .. })));
        assert!(integrate_adaptive(|x| x, 0.0, 1.0, 0.0).is_err());
    }
}
