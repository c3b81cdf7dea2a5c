//! Numerical toolkit for the discrimination of unitary transformations.
//!
//! Given a set of unitaries, how well can a measurement tell them apart?
//! This crate answers that question quantitatively:
//!
//! - [`linalg`]: dense complex linear algebra substrate — unitarity checks,
//!   spectral decomposition of unitaries, Kronecker products, the
//!   vectorization calculus `|E⟩⟩ = Σ E_ij |i⟩|j⟩`, partial traces, von
//!   Neumann entropy, and numeric rank.
//! - [`probe`]: bipartite probe states represented by their operator `E`,
//!   with Schmidt structure, entanglement entropy, and the majorization
//!   partial order.
//! - [`pair`]: discrimination of two unitaries via the eigenphase polygon of
//!   `U2† U1` — minimum error probability, optimal probe, invariance under
//!   extension by an ancilla, and the number of parallel uses needed for
//!   perfect discrimination.
//! - [`covariant`]: discrimination within a finite projective unitary
//!   irreducible representation — group twirl, output-space dimension,
//!   Holevo information, average overlap, and the covariant-POVM likelihood
//!   bound.

pub mod covariant;
pub mod error;
pub mod linalg;
pub mod pair;
pub mod probe;
pub mod random;
pub mod tol;

pub use error::{Error, Result};
