use thiserror::Error;

/// Errors produced by state construction and geometric solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not hermitian (max deviation {max_dev:e})")]
    NotHermitian { max_dev: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is not one (got {trace})")]
    TraceNotOne { trace: f64 },

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("vector is not unit length (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("density matrix too close to singular for the Bures solver (min eigenvalue {min_eigenvalue:e})")]
    Degenerate { min_eigenvalue: f64 },

    #[error("angle triple is not realizable as a constellation (min Gram eigenvalue {min_gram_eigenvalue:e})")]
    Unrealizable { min_gram_eigenvalue: f64 },

    #[error("constellation is empty")]
    EmptyConstellation,

    #[error("tensor operator rank L={l} exceeds 2s={two_s}")]
    RankTooLarge { l: i64, two_s: i64 },

    #[error("invalid half-integer argument: {value}")]
    InvalidHalfInteger { value: f64 },

    #[error("angular momenta mix integer and half-integer sectors inconsistently")]
    ParityViolation,

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
