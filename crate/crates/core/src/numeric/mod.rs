//! Numerical kernels and independent oracles.

pub mod fd;
pub mod linalg;
pub mod ode;
pub mod quad;

pub use fd::{fd_bound_spectrum, FDGrid, FdOperator, FdSpectrum};
pub use linalg::{solve_linear_complex, ComplexMatrix};
pub use ode::{ode_transmission_oracle, StepControl};
pub use quad::integrate_adaptive;
