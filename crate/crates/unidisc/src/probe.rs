//! Bipartite probe states in operator form.
//!
//! A pure state on `H ⊗ H` is written `|E⟩⟩ = Σᵢⱼ Eᵢⱼ |i⟩|j⟩` with the probe
//! operator `E` normalized to `Tr[E†E] = 1`. Schmidt structure of the state
//! is exactly the singular value structure of `E`: the Schmidt coefficients
//! are the singular values, the Schmidt rank is the numeric rank, and the
//! reduced states are `E E†` and `(E†E)ᵀ`.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::tol;

/// Coefficients below this are treated as absent Schmidt terms.
pub const SCHMIDT_RANK_CUTOFF: f64 = 1e-10;

/// Partial-sum ties in majorization comparisons within this are exact ties.
pub const MAJORIZATION_TIE_TOL: f64 = 1e-12;

/// A normalized probe operator: `Tr[E†E] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeState {
    e: CMatrix,
}

impl ProbeState {
    /// The probe operator `E`.
    pub fn operator(&self) -> &CMatrix {
        &self.e
    }

    /// Local dimension `d`.
    pub fn dim(&self) -> usize {
        self.e.nrows()
    }

    /// The bipartite state vector `|E⟩⟩`.
    pub fn state_vector(&self) -> CVector {
        linalg::vec_op(&self.e)
    }
}

/// Schmidt structure of a probe state.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    /// Schmidt coefficients, descending, `Σ cⱼ² = 1`.
    pub coefficients: Vec<f64>,
    /// Count of coefficients above [`SCHMIDT_RANK_CUTOFF`].
    pub rank: usize,
    /// Entanglement entropy `−Σ cⱼ² log₂ cⱼ²` in bits.
    pub entropy_bits: f64,
}

impl SchmidtData {
    /// Reduced-state spectrum `{cⱼ²}`, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        self.coefficients.iter().map(|&x| x * x).collect()
    }
}

/// Builds a probe state from any nonzero operator, normalizing it.
pub fn make_probe(e: &CMatrix) -> Result<ProbeState> {
    linalg::validate(e)?;
    let norm = e.norm();
    if norm <= tol::ALGEBRAIC {
        return Err(Error::ZeroMatrix);
    }
    Ok(ProbeState {
        e: e.map(|z| z / c(norm, 0.0)),
    })
}

/// The maximally entangled probe `E = I/√d`, i.e. `|I/√d⟩⟩`.
pub fn maximally_entangled(d: usize) -> ProbeState {
    assert!(d >= 1, "dimension must be positive");
    ProbeState {
        e: linalg::identity(d).map(|z| z / c((d as f64).sqrt(), 0.0)),
    }
}

/// Schmidt decomposition data of a probe state.
pub fn schmidt(probe: &ProbeState) -> SchmidtData {
    let coefficients = linalg::singular_values_desc(&probe.e);
    let rank = coefficients
        .iter()
        .filter(|&&s| s > SCHMIDT_RANK_CUTOFF)
        .count();
    let mut entropy = 0.0;
    for &s in &coefficients {
        let p = s * s;
        if p > tol::ENTROPY_CUTOFF {
            entropy -= p * p.log2();
        }
    }
    SchmidtData {
        coefficients,
        rank,
        entropy_bits: entropy,
    }
}

/// Outcome of a majorization comparison between two spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Majorization {
    /// Spectra agree termwise within the tie tolerance.
    Equal,
    /// The first spectrum majorizes the second (first is less mixed).
    First,
    /// The second spectrum majorizes the first.
    Second,
    /// Neither majorizes the other.
    Incomparable,
}

/// Majorization partial order on probability spectra.
///
/// Inputs are sorted descending and zero-padded to a common length; partial
/// sums are compared with ties resolved within [`MAJORIZATION_TIE_TOL`].
pub fn majorizes(a: &[f64], b: &[f64]) -> Majorization {
    let n = a.len().max(b.len());
    let mut pa: Vec<f64> = a.to_vec();
    let mut pb: Vec<f64> = b.to_vec();
    pa.resize(n, 0.0);
    pb.resize(n, 0.0);
    pa.sort_by(|x, y| y.partial_cmp(x).unwrap());
    pb.sort_by(|x, y| y.partial_cmp(x).unwrap());

    let mut first_ahead = false;
    let mut second_ahead = false;
    let mut sum_a = 0.0;
    let mut sum_b = 0.0;
    for k in 0..n {
        sum_a += pa[k];
        sum_b += pb[k];
        if sum_a > sum_b + MAJORIZATION_TIE_TOL {
            first_ahead = true;
        } else if sum_b > sum_a + MAJORIZATION_TIE_TOL {
            second_ahead = true;
        }
    }
    match (first_ahead, second_ahead) {
        (false, false) => Majorization::Equal,
        (true, false) => Majorization::First,
        (false, true) => Majorization::Second,
        (true, true) => Majorization::Incomparable,
    }
}

/// Builds a probe with the given Schmidt coefficients on the computational
/// basis: `E = diag(c)` normalized. Coefficients need not be pre-normalized.
pub fn probe_from_coefficients(coeffs: &[f64]) -> Result<ProbeState> {
    let d = coeffs.len();
    let e = CMatrix::from_diagonal(&DVector::from_iterator(
        d,
        coeffs.iter().map(|&x| Complex64::new(x, 0.0)),
    ));
    make_probe(&e)
}
