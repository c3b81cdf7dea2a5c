//! Seeded random generators for matrices, unitaries, and probe operators.
//!
//! All functions take the RNG explicitly so callers control determinism;
//! tests use `ChaCha8Rng::seed_from_u64` throughout.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, CMatrix, CVector};

/// Ginibre matrix: i.i.d. standard complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the phase fix
/// `Q ← Q·diag(r_jj/|r_jj|)` that makes the distribution exactly Haar.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let g = random_matrix(rng, d);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let m = rjj.norm();
        let ph = if m > 0.0 { rjj / m } else { Complex64::ONE };
        for i in 0..d {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Random Hermitian matrix `(G + G†)/2` with `O(1)` entries.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let g = random_matrix(rng, d);
    (&g + g.adjoint()).map(|z| z * c(0.5, 0.0))
}

/// Random unit vector (Ginibre column, normalized).
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CVector {
    loop {
        let v = DVector::from_fn(d, |_, _| {
            c(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let n = v.norm();
        if n > 1e-6 {
            return v.map(|z| z / c(n, 0.0));
        }
    }
}

/// Random probe operator with `Tr[E†E] = 1` (normalized Ginibre).
pub fn random_probe_op<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    loop {
        let g = random_matrix(rng, d);
        let n = g.norm();
        if n > 1e-6 {
            return g.map(|z| z / c(n, 0.0));
        }
    }
}

/// Random probe operator with exact Schmidt rank `k`: `U·diag(c)·V†` with
/// `k` strictly positive coefficients and `Σc² = 1`.
pub fn random_probe_with_rank<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> CMatrix {
    assert!(k >= 1 && k <= d, "rank must be in 1..=d");
    let u = random_unitary(rng, d);
    let v = random_unitary(rng, d);
    let mut coeffs = vec![0.0f64; d];
    let mut norm2 = 0.0;
    for slot in coeffs.iter_mut().take(k) {
        // Bounded away from zero so the rank is unambiguous numerically.
        let x: f64 = 0.2 + rng.gen::<f64>();
        *slot = x;
        norm2 += x * x;
    }
    let scale = norm2.sqrt();
    let diag = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            c(coeffs[i] / scale, 0.0)
        } else {
            Complex64::ZERO
        }
    });
    u * diag * v.adjoint()
}
