//! Default numerical tolerances.
//!
//! Three-level ladder: algebraic identities are checked at machine-level
//! precision, decomposition residuals and rank cutoffs one step looser, and
//! eigenvalue clustering looser still. Every operation that consumes one of
//! these accepts an override.

/// Algebraic identities (inner products, normalization, hermiticity).
pub const ALGEBRAIC: f64 = 1e-12;

/// Decomposition residuals and relative rank cutoffs.
pub const DECOMP: f64 = 1e-10;

/// Eigenvalue cluster detection for degenerate spectra.
pub const CLUSTER: f64 = 1e-8;

/// Merge tolerance for eigenphases, in radians.
pub const PHASE_MERGE: f64 = 1e-9;

/// Eigenvalues below this are treated as exact zeros in entropy sums.
pub const ENTROPY_CUTOFF: f64 = 1e-14;
