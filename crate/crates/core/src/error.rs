use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e} > {tol:.1e})")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("matrix is not unimodular (|det - 1| = {residual:.3e} > {tol:.1e})")]
    NotUnimodular { residual: f64, tol: f64 },

    #[error("argument {z} lies within {guard:.1e} of a lattice pole")]
    PoleProximity { z: String, guard: f64 },

    #[error("s = {s} is outside the potential domain {domain}")]
    OutOfDomain { s: f64, domain: String },

    #[error("branch {requested} is unavailable for invariants with discriminant {discriminant:.6e}")]
    BranchUnavailable { requested: &'static str, discriminant: f64 },

    #[error("closed form {requested} does not apply: {reason}")]
    CaseMismatch { requested: &'static str, reason: String },

    #[error("failed to invert the potential at {target}: residual {residual:.3e} after {iterations} iterations")]
    InversionFailure { target: String, residual: f64, iterations: usize },

    #[error("determinant drift {drift:.3e} at s = {s} exceeds {limit:.1e}")]
    DeterminantDrift { s: f64, drift: f64, limit: f64 },

    #[error("trajectory blew up at s = {s} (|h| = {magnitude:.3e})")]
    BlowUp { s: f64, magnitude: f64 },

    #[error("sample grids differ: {0}")]
    GridMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
