//! Finite-difference eigensolver for the longitudinal equation
//!
//! ```text
//! -c Z'' + 2 i c l f(z) Z' + [V_g + c (f^2 + 1/R^2) l^2 + i c l f'(z)] Z = e Z,   c = hbar^2 / 2m
//! ```
//!
//! with `Z(0) = Z(L) = 0`. The operator is discretised as written, first
//! derivative included, so the resulting complex tridiagonal matrix is in
//! general non-Hermitian. Eigenvalues come from shifted inverse iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{
    da_costa_potential, surface_curvatures, CylinderGeometry, PhysicsParams, TwistProfile,
};
use crate::numeric::linalg::solve_tridiagonal;
use crate::spectrum::{eigenenergy, ModeNumbers};

pub const MIN_POINTS: usize = 16;
const MAX_ITER: usize = 300;
const RQI_STEPS: usize = 3;

/// Uniform interior grid with Dirichlet endpoints excluded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FDGrid {
    pub points: usize,
    pub length: f64,
}

impl FDGrid {
    pub fn new(points: usize, length: f64) -> Result<Self> {
        if points < MIN_POINTS {
            return Err(Error::InvalidInput(format!(
                "grid needs at least {MIN_POINTS} points, got {points}"
            )));
        }
        if !(length > 0.0) {
            return Err(Error::InvalidInput(format!("grid length must be positive, got {length}")));
        }
        Ok(Self { points, length })
    }

    pub fn spacing(&self) -> f64 {
        self.length / (self.points + 1) as f64
    }

    /// Interior node `i` in `0..points`, at `z = (i + 1) h`.
    pub fn node(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.spacing()
    }

    pub fn refined(&self) -> Self {
        Self {
            points: 2 * self.points,
            length: self.length,
        }
    }
}

/// Tridiagonal discretisation of the longitudinal operator for one mode `l`.
#[derive(Debug, Clone)]
pub struct FdOperator {
    pub grid: FDGrid,
    pub sub: Vec<Complex64>,
    pub diag: Vec<Complex64>,
    pub sup: Vec<Complex64>,
}

impl FdOperator {
    pub fn assemble(
        l: i32,
        geom: &CylinderGeometry,
        twist: &TwistProfile,
        phys: &PhysicsParams,
        grid: FDGrid,
    ) -> Self {
        let n = grid.points;
        let h = grid.spacing();
        let c = phys.kinetic_scale();
        let lf = l as f64;
        let inv_r2 = 1.0 / (geom.radius * geom.radius);
        let i = Complex64::i();

        let mut sub = Vec::with_capacity(n - 1);
        let mut diag = Vec::with_capacity(n);
        let mut sup = Vec::with_capacity(n - 1);
        for k in 0..n {
            let z = grid.node(k);
            let f = twist.f(z);
            let v_g = da_costa_potential(&surface_curvatures(geom, f), phys);
            let real = 2.0 * c / (h * h) + v_g + c * (f * f + inv_r2) * lf * lf;
            diag.push(Complex64::new(real, 0.0) + i * (c * lf * twist.f_prime(z)));
            // 2 i c l f (Z_{k+1} - Z_{k-1}) / 2h
            let drift = i * (c * lf * f / h);
            let kinetic = Complex64::new(-c / (h * h), 0.0);
            if k + 1 < n {
                sup.push(kinetic + drift);
            }
            if k > 0 {
                sub.push(kinetic - drift);
            }
        }
        Self {
            grid,
            sub,
            diag,
            sup,
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut acc = self.diag[k] * x[k];
                if k > 0 {
                    acc += self.sub[k - 1] * x[k - 1];
                }
                if k + 1 < n {
                    acc += self.sup[k] * x[k + 1];
                }
                acc
            })
            .collect()
    }

    /// Lower bound on the real part of every eigenvalue (Gershgorin discs).
    pub fn gershgorin_lower_bound(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut radius = 0.0;
                if k > 0 {
                    radius += self.sub[k - 1].norm();
                }
                if k + 1 < n {
                    radius += self.sup[k].norm();
                }
                self.diag[k].re - radius
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn norm_estimate(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut s = self.diag[k].norm();
                if k > 0 {
                    s += self.sub[k - 1].norm();
                }
                if k + 1 < n {
                    s += self.sup[k].norm();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    fn shifted_solve(&self, shift: Complex64, x: &[Complex64]) -> Vec<Complex64> {
        let diag: Vec<Complex64> = self.diag.iter().map(|d| d - shift).collect();
        solve_tridiagonal(&self.sub, &diag, &self.sup, x)
    }

    /// Eigenpair whose eigenvalue lies closest to `shift`.
    ///
    /// Fixed-shift inverse iteration followed by a few Rayleigh-shift steps.
    /// The eigenvector is returned with unit 2-norm.
    pub fn eigenpair_near(&self, shift: f64) -> Result<(Complex64, Vec<Complex64>)> {
        let n = self.dim();
        let mut x: Vec<Complex64> = (0..n)
            .map(|k| Complex64::new(1.0 + 0.25 * ((k % 7) as f64), 0.1 * ((k % 3) as f64)))
            .collect();
        normalize(&mut x);
        let mut sigma = Complex64::new(shift, 0.0);
        let mut lambda = sigma;
        let mut converged = false;

        for _ in 0..MAX_ITER {
            let (next, estimate) = self.inverse_step(sigma, &x)?;
            let change = (estimate - lambda).norm();
            x = next;
            lambda = estimate;
            if change <= 1e-13 * lambda.norm().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::EigensolverFailure(format!(
                "inverse iteration from shift {shift} did not settle"
            )));
        }
        for _ in 0..RQI_STEPS {
            sigma = lambda;
            let (next, estimate) = self.inverse_step(sigma, &x)?;
            x = next;
            lambda = estimate;
        }

        let ax = self.apply(&x);
        let residual = ax
            .iter()
            .zip(&x)
            .map(|(a, v)| (a - lambda * v).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if !(residual <= 1e-9 * self.norm_estimate()) {
            return Err(Error::EigensolverFailure(format!(
                "residual {residual:e} too large near shift {shift}"
            )));
        }
        Ok((lambda, x))
    }

    fn inverse_step(&self, sigma: Complex64, x: &[Complex64]) -> Result<(Vec<Complex64>, Complex64)> {
        let mut y = self.shifted_solve(sigma, x);
        // x has unit norm, so for an eigenvector y = x / (lambda - sigma)
        let overlap: Complex64 = x.iter().zip(&y).map(|(a, b)| a.conj() * b).sum();
        if !(overlap.is_finite() && overlap.norm() > 0.0) {
            return Err(Error::EigensolverFailure("inverse iteration broke down".into()));
        }
        let estimate = sigma + 1.0 / overlap;
        normalize(&mut y);
        Ok((y, estimate))
    }

    /// Lowest eigenpair, found without any prior guess by shifting to the
    /// Gershgorin lower bound.
    pub fn lowest_eigenpair(&self) -> Result<(Complex64, Vec<Complex64>)> {
        let bound = self.gershgorin_lower_bound();
        self.eigenpair_near(bound - 1e-9 * bound.abs().max(1.0))
    }
}

fn normalize(x: &mut [Complex64]) {
    let norm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    for v in x.iter_mut() {
        *v /= norm;
    }
}

/// Richardson extrapolation of a value with `O(h^2)` error.
pub fn richardson(coarse: Complex64, h_coarse: f64, fine: Complex64, h_fine: f64) -> Complex64 {
    let (a, b) = (h_coarse * h_coarse, h_fine * h_fine);
    (a * fine - b * coarse) / (a - b)
}

#[derive(Debug, Clone)]
pub struct FdSpectrum {
    pub coarse: Vec<Complex64>,
    pub fine: Vec<Complex64>,
    pub extrapolated: Vec<Complex64>,
    /// Lowest eigenvalue on the fine grid found without seeding.
    pub lowest_unseeded: Complex64,
    /// Gershgorin lower bound on the real spectrum of the fine operator.
    pub lower_bound: f64,
}

impl FdSpectrum {
    /// Real parts of the extrapolated eigenvalues.
    pub fn energies(&self) -> Vec<f64> {
        self.extrapolated.iter().map(|z| z.re).collect()
    }

    pub fn max_imag(&self) -> f64 {
        self.extrapolated.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

fn seeded_levels(op: &FdOperator, l: i32, geom: &CylinderGeometry, phys: &PhysicsParams, count: usize) -> Result<Vec<Complex64>> {
    let mut out: Vec<Complex64> = Vec::with_capacity(count);
    for n in 1..=count {
        let seed = eigenenergy(ModeNumbers::new(n as u32, l)?, geom, phys);
        let (lambda, _) = op.eigenpair_near(seed)?;
        if let Some(prev) = out.last() {
            if !(lambda.re > prev.re) {
                return Err(Error::EigensolverFailure(format!(
                    "level {n} ({}) did not separate from level {} ({})",
                    lambda.re,
                    n - 1,
                    prev.re
                )));
            }
        }
        out.push(lambda);
    }
    Ok(out)
}

/// Lowest `count` eigenvalues of the discretised longitudinal operator on
/// grids `N` and `2N`, plus their Richardson extrapolation.
pub fn fd_bound_spectrum(
    l: i32,
    geom: &CylinderGeometry,
    twist: &TwistProfile,
    phys: &PhysicsParams,
    grid: FDGrid,
    count: usize,
) -> Result<FdSpectrum> {
    if count == 0 {
        return Err(Error::InvalidInput("count must be at least 1".into()));
    }
    if (grid.length - geom.length).abs() > 1e-12 * geom.length {
        return Err(Error::InvalidInput("grid length must equal the cylinder length".into()));
    }
    let resolution = count as f64 * std::f64::consts::PI * grid.spacing() / grid.length;
    if resolution >= 0.3 {
        return Err(Error::InvalidInput(format!(
            "grid too coarse for {count} levels (n pi h / L = {resolution:.3})"
        )));
    }
    let fine_grid = grid.refined();
    let coarse_op = FdOperator::assemble(l, geom, twist, phys, grid);
    let fine_op = FdOperator::assemble(l, geom, twist, phys, fine_grid);

    let coarse = seeded_levels(&coarse_op, l, geom, phys, count)?;
    let fine = seeded_levels(&fine_op, l, geom, phys, count)?;

    let (lowest_unseeded, _) = fine_op.lowest_eigenpair()?;
    if (lowest_unseeded - fine[0]).norm() > 1e-8 * fine[0].norm().max(1.0) {
        return Err(Error::EigensolverFailure(format!(
            "unseeded lowest eigenvalue {} differs from seeded ground level {}",
            lowest_unseeded, fine[0]
        )));
    }

    let extrapolated = coarse
        .iter()
        .zip(&fine)
        .map(|(&a, &b)| richardson(a, grid.spacing(), b, fine_grid.spacing()))
        .collect();
    Ok(FdSpectrum {
        coarse,
        fine,
        extrapolated,
        lowest_unseeded,
        lower_bound: fine_op.gershgorin_lower_bound(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn geom(r: f64, l: f64) -> CylinderGeometry {
        CylinderGeometry::new(r, l).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(FDGrid::new(8, 1.0).is_err());
        assert!(FDGrid::new(100, -1.0).is_err());
        let g = FDGrid::new(99, 1.0).unwrap();
        assert!((g.spacing() - 0.01).abs() < 1e-15);
        assert!((g.node(0) - 0.01).abs() < 1e-15);
        assert!((g.node(98) - 0.99).abs() < 1e-14);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let g = geom(1.0, 1.0);
        let res = fd_bound_spectrum(
            0,
            &g,
            &TwistProfile::Constant(0.0),
            &PhysicsParams::natural(),
            FDGrid::new(16, 1.0).unwrap(),
            3,
        );
        assert!(matches!(res, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn untwisted_ground_state() {
        let g = geom(1.0, 1.0);
        let s = fd_bound_spectrum(
            0,
            &g,
            &TwistProfile::Constant(0.0),
            &PhysicsParams::natural(),
            FDGrid::new(2000, 1.0).unwrap(),
            3,
        )
        .unwrap();
        let exact = PI * PI / 2.0 - 0.125;
        assert!(((s.energies()[0] - exact) / exact).abs() < 1e-6);
        assert!(s.max_imag() < 1e-9);
    }

    #[test]
    fn twisted_operator_is_hermitian_for_constant_twist() {
        let op = FdOperator::assemble(
            2,
            &geom(1.0, 1.0),
            &TwistProfile::Constant(0.7),
            &PhysicsParams::natural(),
            FDGrid::new(32, 1.0).unwrap(),
        );
        for (a, b) in op.sub.iter().zip(&op.sup) {
            assert!((a - b.conj()).norm() < 1e-12);
        }
        assert!(op.diag.iter().all(|d| d.im == 0.0));
    }

    #[test]
    fn error_is_second_order() {
        let g = geom(1.0, 1.0);
        let phys = PhysicsParams::natural();
        let exact = PI * PI / 2.0 - 0.125;
        let err = |n: usize| {
            let op = FdOperator::assemble(0, &g, &TwistProfile::Constant(0.5), &phys, FDGrid::new(n, 1.0).unwrap());
            (op.eigenpair_near(exact).unwrap().0.re - exact).abs()
        };
        // h = 1/(N+1): N = 99 and 199 halve the spacing exactly
        let ratio = err(99) / err(199);
        assert!(ratio >= 3.5, "ratio {ratio}");
    }

    #[test]
    fn richardson_removes_quadratic_term() {
        let f = |h: f64| Complex64::new(2.0 + 3.0 * h * h, -h * h);
        let v = richardson(f(0.1), 0.1, f(0.04), 0.04);
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-14);
    }
}
