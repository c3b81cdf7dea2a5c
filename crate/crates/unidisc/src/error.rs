//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by the discrimination toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix entry at ({row},{col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("matrix is not unitary (deviation {deviation:.3e} exceeds tolerance {tol:.3e})")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix dimension {dim} is not a perfect square")]
    DimensionNotSquare { dim: usize },

    #[error("not a density matrix: {reason}")]
    NotDensityMatrix { reason: String },

    #[error("matrix is zero")]
    ZeroMatrix,

    #[error("eigensolver failed to converge: {context}")]
    NoConvergence { context: String },

    #[error("value {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("set is not closed under multiplication: product of elements {g} and {h} matches no listed element")]
    NotClosed { g: usize, h: usize },

    #[error("elements {a} and {b} are proportional to each other; representation is ambiguous")]
    AmbiguousMatch { a: usize, b: usize },

    #[error("representation failed the irreducibility certificate (twirl deviation {deviation:.3e})")]
    NotIrreducible { deviation: f64 },

    #[error("internal consistency check failed: {context}")]
    Inconsistent { context: String },

    #[error("invalid POVM seed: {reason}")]
    InvalidSeed { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
