//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by solvers, observables, and IO.
#[derive(Debug, Error)]
pub enum Error {
    #[error("state has no amplitude above 1e-300; cannot normalize")]
    ZeroState,

    #[error("site count {0} is too small; need N >= 2")]
    BadSize(usize),

    #[error("parameter `{name}` is not a finite real number")]
    NonFiniteParameter { name: &'static str },

    #[error("matrix is not Hermitian: max |H - H^dagger| = {deviation:.3e}")]
    NonHermitian { deviation: f64 },

    #[error("scattering-factor denominator magnitude {0:.3e} below 1e-14")]
    SingularDenominator(f64),

    #[error("isolated {found} Bethe roots, expected at least {expected}")]
    RootCountMismatch { expected: usize, found: usize },

    #[error("no quasi-momentum branch closes at this (P, eps)")]
    NoRoots,

    #[error("weight system determinant {0:.3e} is bounded away from zero; eps is not an eigenvalue")]
    NoNontrivialSolution(f64),

    #[error("weights are inconsistent with the supplied components: {0}")]
    InconsistentWeights(String),

    #[error("doublon branch `{branch}` not found at P = {p:.6}")]
    BranchNotFound { branch: &'static str, p: f64 },

    #[error("solver failed to converge in region {region} at P index {p_index}")]
    ConvergenceFailure { region: &'static str, p_index: usize },

    #[error("energy denominator within 1e-12 of a pole at eps = {eps:.12}")]
    PoleEncountered { eps: f64 },

    #[error("state is not normalized: weighted norm^2 = {0:.12}")]
    NotNormalized(f64),

    #[error("wrong observable mode: {0}")]
    WrongMode(String),

    #[error("integrator step {dt:.3e} exceeds stability bound {bound:.3e}")]
    StepTooLarge { dt: f64, bound: f64 },

    #[error("spectral evolution requires a completed diagonalization")]
    DiagonalizationMissing,

    #[error("statistics window [{t0}, {t1}] selects fewer than {min_samples} samples")]
    EmptyWindow { t0: f64, t1: f64, min_samples: usize },

    #[error("eigensolver backend failure: {0}")]
    Linalg(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
