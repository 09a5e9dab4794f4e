use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("metric is singular (det = {det:e})")]
    SingularMetric { det: f64 },

    #[error("metric is not positive definite (g_pp = {g_pp}, det = {det})")]
    NotPositiveDefinite { g_pp: f64, det: f64 },

    #[error("tensor variance mismatch: expected {expected}, found {found}")]
    VarianceMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("adaptive quadrature did not converge on [{a}, {b}] within depth {max_depth}")]
    QuadratureFailure { a: f64, b: f64, max_depth: u32 },

    #[error("energy {energy} lies within the exclusion window of threshold {threshold}")]
    ThresholdDegeneracy { energy: f64, threshold: f64 },

    #[error("no propagating channel at energy {energy} (threshold {threshold})")]
    NoPropagatingChannel { energy: f64, threshold: f64 },

    #[error("singular matching system (pivot ratio estimate {condition:e})")]
    SingularMatch { condition: f64 },

    #[error("eigensolver failed: {0}")]
    EigensolverFailure(String),

    #[error("ODE integrator failed: {0}")]
    IntegratorFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
