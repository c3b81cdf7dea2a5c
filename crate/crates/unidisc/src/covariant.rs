//! Covariant estimation of an unknown group element.
//!
//! The scenario: a black box applies one element `U_g` of a finite
//! projective unitary representation, uniformly at random, to one half of a
//! bipartite probe `|E⟩⟩`. The ensemble of outputs `|Ψ_g⟩⟩ = (U_g ⊗ I)|E⟩⟩`
//! carries information about `g`; this module computes how much, and how
//! well a covariant measurement can localize `g`.
//!
//! All figures of merit use the invariant weight `μ(g) = d/|G|`, so
//! `μ(G) = Σ_g μ(g) = d`. For an irreducible representation the twirl
//! collapses any operator: `Σ_g μ(g) U_g O U_g† = Tr[O]·I`, which is both
//! the workhorse identity and the (probabilistic) irreducibility
//! certificate.
//!
//! Closed forms are paired with their defining averages: the Holevo quantity
//! `χ` is computed directly from output entropies and from
//! `log₂ d + S(E†E)`, and the average pairwise overlap `Ω` from its double
//! group average and from `Tr[(E†E)²]/(2μ(G))`. Agreement is part of the
//! test contract, not assumed.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector, EntropyBase, Subsystem};
use crate::probe::ProbeState;
use crate::random;
use crate::tol;

/// Trace-proportionality matches during validation use this tolerance
/// (relative to the dimension).
pub const MATCH_TOL: f64 = 1e-8;

/// Twirl deviation threshold for the irreducibility certificate.
pub const IRREDUCIBILITY_TOL: f64 = 1e-8;

/// Default number of random Hermitian twirl trials in the certificate.
pub const IRREDUCIBILITY_TRIALS: usize = 20;

/// Largest group order for which defining double averages are cross-checked.
pub const DOUBLE_SUM_CAP: usize = 64;

/// A validated finite projective unitary representation.
///
/// Construction goes through [`validate_rep`] or [`weyl_heisenberg`], which
/// establish: all elements unitary, no two proportional, closure
/// `U_g U_h = ω(g,h) U_{gh}` with `|ω| = 1`, a two-sided identity, group
/// axioms for the index table, and cocycle associativity
/// `ω(gh,l) ω(g,h) = ω(g,hl) ω(h,l)` within 1e-10.
#[derive(Debug, Clone)]
pub struct ProjectiveRep {
    elements: Vec<CMatrix>,
    mult_table: Vec<Vec<usize>>,
    cocycle: Vec<Vec<Complex64>>,
    identity_index: usize,
    dim: usize,
    match_residual: f64,
    assoc_residual: f64,
    identity_residual: f64,
}

impl ProjectiveRep {
    /// Group order `|G|`.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Representation dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The unitary for group index `g`.
    pub fn element(&self, g: usize) -> &CMatrix {
        &self.elements[g]
    }

    /// Index of the product: `U_g U_h ∝ U_{product(g,h)}`.
    pub fn product(&self, g: usize, h: usize) -> usize {
        self.mult_table[g][h]
    }

    /// Cocycle phase: `U_g U_h = ω(g,h) U_{gh}`.
    pub fn omega(&self, g: usize, h: usize) -> Complex64 {
        self.cocycle[g][h]
    }

    /// Index of the identity element.
    pub fn identity_index(&self) -> usize {
        self.identity_index
    }

    /// Invariant measure weight `μ(g) = d/|G|`.
    pub fn mu(&self) -> f64 {
        self.dim as f64 / self.order() as f64
    }

    /// Total measure `μ(G) = d`.
    pub fn mu_total(&self) -> f64 {
        self.dim as f64
    }

    /// Worst deviation of `|Tr[U_k† U_g U_h]|/d` from 1 over all matched
    /// products.
    pub fn match_residual(&self) -> f64 {
        self.match_residual
    }

    /// Worst cocycle associativity violation over all triples.
    pub fn assoc_residual(&self) -> f64 {
        self.assoc_residual
    }

    /// Worst deviation of `ω(g,e)` and `ω(e,g)` from 1. Not required to
    /// vanish: representations may carry unnormalized phase conventions, and
    /// standard shift-multiply constructions do.
    pub fn identity_residual(&self) -> f64 {
        self.identity_residual
    }
}

/// The Weyl–Heisenberg (shift-multiply) representation in dimension `d`:
/// `U(m,n) = Σ_k e^{2πikm/d} |k⟩⟨k⊕n|`, indexed `g = m·d + n`, with
/// `|G| = d²` elements and cocycle `ω((m,n),(m′,n′)) = e^{2πi n m′/d}`.
///
/// For `d = 2` this is `{I, σ_z, σ_x, σ_zσ_x}`.
pub fn weyl_heisenberg(d: usize) -> Result<ProjectiveRep> {
    if d < 1 {
        return Err(Error::OutOfRange {
            value: d as f64,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    let mut elements = Vec::with_capacity(d * d);
    for m in 0..d {
        for n in 0..d {
            let mut u = CMatrix::zeros(d, d);
            for k in 0..d {
                let phase = std::f64::consts::TAU * (k * m) as f64 / d as f64;
                u[(k, (k + n) % d)] = Complex64::from_polar(1.0, phase);
            }
            elements.push(u);
        }
    }
    validate_rep(&elements)
}

/// Validates a candidate projective representation and builds its
/// multiplication table and cocycle numerically.
///
/// Products are matched by trace proportionality: `k` matches `U_g U_h` when
/// `|Tr[U_k† U_g U_h]| = d` within `d·`[`MATCH_TOL`]. A pre-scan rejects
/// element lists containing proportional pairs, which would make matches
/// ambiguous.
pub fn validate_rep(elements: &[CMatrix]) -> Result<ProjectiveRep> {
    if elements.is_empty() {
        return Err(Error::Inconsistent {
            context: "representation needs at least one element".into(),
        });
    }
    let d = elements[0].nrows();
    for u in elements {
        linalg::validate(u)?;
        if u.nrows() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: u.nrows(),
            });
        }
        let deviation = linalg::unitarity_deviation(u);
        if deviation > tol::DECOMP {
            return Err(Error::NotUnitary {
                deviation,
                tol: tol::DECOMP,
            });
        }
    }
    let n = elements.len();
    let df = d as f64;

    for a in 0..n {
        for b in a + 1..n {
            let t = linalg::frob_inner(&elements[a], &elements[b]).norm();
            if t >= df * (1.0 - MATCH_TOL) {
                return Err(Error::AmbiguousMatch { a, b });
            }
        }
    }

    let mut mult_table = vec![vec![0usize; n]; n];
    let mut cocycle = vec![vec![Complex64::ONE; n]; n];
    let mut match_residual = 0.0f64;
    for g in 0..n {
        for h in 0..n {
            let p = &elements[g] * &elements[h];
            let mut found = None;
            for (k, u) in elements.iter().enumerate() {
                let t = linalg::frob_inner(u, &p) / c(df, 0.0);
                let mag = t.norm();
                if (mag - 1.0).abs() <= MATCH_TOL {
                    found = Some((k, t / c(mag, 0.0)));
                    match_residual = match_residual.max((mag - 1.0).abs());
                    break;
                }
            }
            let Some((k, omega)) = found else {
                return Err(Error::NotClosed { g, h });
            };
            mult_table[g][h] = k;
            cocycle[g][h] = omega;
        }
    }

    // Cancellation makes every row and column a permutation.
    for g in 0..n {
        let mut seen_row = vec![false; n];
        let mut seen_col = vec![false; n];
        for h in 0..n {
            seen_row[mult_table[g][h]] = true;
            seen_col[mult_table[h][g]] = true;
        }
        if seen_row.iter().any(|s| !s) || seen_col.iter().any(|s| !s) {
            return Err(Error::Inconsistent {
                context: format!("multiplication table row/column {g} is not a permutation"),
            });
        }
    }

    let identity_index = (0..n)
        .find(|&e| (0..n).all(|g| mult_table[e][g] == g && mult_table[g][e] == g))
        .ok_or_else(|| Error::Inconsistent {
            context: "closed element set has no two-sided identity".into(),
        })?;

    let mut assoc_residual = 0.0f64;
    for g in 0..n {
        for h in 0..n {
            let gh = mult_table[g][h];
            for l in 0..n {
                let hl = mult_table[h][l];
                let lhs = cocycle[gh][l] * cocycle[g][h];
                let rhs = cocycle[g][hl] * cocycle[h][l];
                assoc_residual = assoc_residual.max((lhs - rhs).norm());
            }
        }
    }
    if assoc_residual > tol::DECOMP {
        return Err(Error::Inconsistent {
            context: format!("cocycle associativity violated by {assoc_residual:.3e}"),
        });
    }

    let mut identity_residual = 0.0f64;
    for row in &cocycle {
        identity_residual = identity_residual.max((row[identity_index] - Complex64::ONE).norm());
    }
    for omega in &cocycle[identity_index] {
        identity_residual = identity_residual.max((omega - Complex64::ONE).norm());
    }

    Ok(ProjectiveRep {
        elements: elements.to_vec(),
        mult_table,
        cocycle,
        identity_index,
        dim: d,
        match_residual,
        assoc_residual,
        identity_residual,
    })
}

/// The twirl `Σ_g μ(g) U_g O U_g†` with `μ(g) = d/|G|`.
pub fn twirl(rep: &ProjectiveRep, o: &CMatrix) -> Result<CMatrix> {
    linalg::validate(o)?;
    if o.nrows() != rep.dim {
        return Err(Error::DimensionMismatch {
            left: rep.dim,
            right: o.nrows(),
        });
    }
    let mu = c(rep.mu(), 0.0);
    let mut acc = CMatrix::zeros(rep.dim, rep.dim);
    for u in &rep.elements {
        acc += (u * o * u.adjoint()).map(|z| z * mu);
    }
    Ok(acc)
}

/// Worst deviation of `twirl(O) − Tr[O]·I` over `trials` seeded random
/// Hermitian inputs.
pub fn irreducibility_deviation(rep: &ProjectiveRep, trials: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7769_726c);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let o = random::random_hermitian(&mut rng, rep.dim);
        let t = twirl(rep, &o).expect("twirl of matched dimensions");
        let target = linalg::identity(rep.dim).map(|z| z * o.trace());
        worst = worst.max(linalg::max_abs_diff(&t, &target));
    }
    worst
}

/// Probabilistic irreducibility certificate: true iff the twirl collapses
/// `trials` random Hermitian operators to `Tr[O]·I` within
/// [`IRREDUCIBILITY_TOL`].
pub fn is_irreducible(rep: &ProjectiveRep, trials: usize) -> bool {
    irreducibility_deviation(rep, trials) <= IRREDUCIBILITY_TOL
}

fn certify_irreducible(rep: &ProjectiveRep) -> Result<()> {
    let deviation = irreducibility_deviation(rep, IRREDUCIBILITY_TRIALS);
    if deviation > IRREDUCIBILITY_TOL {
        return Err(Error::NotIrreducible { deviation });
    }
    Ok(())
}

fn ensure_probe_dim(rep: &ProjectiveRep, probe: &ProbeState) -> Result<()> {
    if probe.dim() != rep.dim {
        return Err(Error::DimensionMismatch {
            left: rep.dim,
            right: probe.dim(),
        });
    }
    Ok(())
}

/// Output state `|Ψ_g⟩⟩ = (U_g ⊗ I)|E⟩⟩ = |U_g E⟩⟩` for group index `g`.
fn output_state(rep: &ProjectiveRep, probe: &ProbeState, g: usize) -> CVector {
    linalg::vec_op(&(&rep.elements[g] * probe.operator()))
}

fn outer(v: &CVector) -> CMatrix {
    let n = v.len();
    CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj())
}

/// Average output state `ρ̄ = (1/|G|) Σ_g |Ψ_g⟩⟩⟨⟨Ψ_g|`.
fn average_output(rep: &ProjectiveRep, probe: &ProbeState) -> CMatrix {
    let d2 = rep.dim * rep.dim;
    let weight = c(1.0 / rep.order() as f64, 0.0);
    let mut acc = CMatrix::zeros(d2, d2);
    for g in 0..rep.order() {
        acc += outer(&output_state(rep, probe, g)).map(|z| z * weight);
    }
    acc
}

/// Dimension of the span of the output ensemble.
///
/// Computed both ways: the numeric rank of the weighted output mixture, and
/// the closed form `d · rank(E†E)`. The two must agree; disagreement is an
/// inconsistency, not a tolerance matter.
pub fn output_dimension(rep: &ProjectiveRep, probe: &ProbeState) -> Result<usize> {
    ensure_probe_dim(rep, probe)?;
    certify_irreducible(rep)?;
    let ete = probe.operator().adjoint() * probe.operator();
    let closed = rep.dim * linalg::numeric_rank(&ete, tol::DECOMP);
    let direct = linalg::numeric_rank(&average_output(rep, probe), tol::DECOMP);
    if direct != closed {
        return Err(Error::Inconsistent {
            context: format!(
                "output span rank {direct} differs from closed form {closed}"
            ),
        });
    }
    Ok(closed)
}

/// The Holevo information of the output ensemble, in bits, computed two
/// ways.
#[derive(Debug, Clone, Copy)]
pub struct ChiEstimate {
    /// `S(ρ̄) − (1/|G|) Σ_g S(ρ_g)` from explicit output states.
    pub direct_bits: f64,
    /// `log₂ d + S(E†E)`.
    pub closed_bits: f64,
}

/// Holevo quantity `χ` of the uniform output ensemble.
///
/// The direct path diagonalizes the mixture and every (pure) output; the
/// closed form uses the twirl identity `ρ̄ = I/d ⊗ (E†E)ᵀ`. The two agree
/// within 1e-8 for irreducible representations; tests assert this.
pub fn holevo_chi(rep: &ProjectiveRep, probe: &ProbeState) -> Result<ChiEstimate> {
    ensure_probe_dim(rep, probe)?;
    certify_irreducible(rep)?;

    let rho_bar = average_output(rep, probe);
    let mut mean_output_entropy = 0.0;
    for g in 0..rep.order() {
        let rho_g = outer(&output_state(rep, probe, g));
        mean_output_entropy += linalg::von_neumann_entropy(&rho_g, EntropyBase::Two)?;
    }
    mean_output_entropy /= rep.order() as f64;
    let direct_bits =
        linalg::von_neumann_entropy(&rho_bar, EntropyBase::Two)? - mean_output_entropy;

    let ete = probe.operator().adjoint() * probe.operator();
    let closed_bits =
        (rep.dim as f64).log2() + linalg::von_neumann_entropy(&ete, EntropyBase::Two)?;

    Ok(ChiEstimate {
        direct_bits,
        closed_bits,
    })
}

/// Average pairwise output overlap `Ω`, closed form plus (for small groups)
/// the defining double group average.
#[derive(Debug, Clone, Copy)]
pub struct OverlapEstimate {
    /// `Tr[(E†E)²] / (2 μ(G))`.
    pub closed: f64,
    /// `(1/2)·(1/|G|²) Σ_{g,h} |⟨⟨Ψ_g|Ψ_h⟩⟩|²`, when `|G| ≤` [`DOUBLE_SUM_CAP`].
    pub double_sum: Option<f64>,
}

/// Average squared overlap of output pairs, the figure of merit a good probe
/// minimizes. Smaller `Ω` means more mutually distinguishable outputs;
/// it is Schur-convex in the probe spectrum and minimal at the maximally
/// entangled probe.
pub fn average_overlap(rep: &ProjectiveRep, probe: &ProbeState) -> Result<OverlapEstimate> {
    ensure_probe_dim(rep, probe)?;
    let ete = probe.operator().adjoint() * probe.operator();
    let closed = (&ete * &ete).trace().re / (2.0 * rep.mu_total());

    let double_sum = (rep.order() <= DOUBLE_SUM_CAP).then(|| {
        let states: Vec<CVector> = (0..rep.order())
            .map(|g| output_state(rep, probe, g))
            .collect();
        let mut acc = 0.0;
        for a in &states {
            for b in &states {
                acc += a.dotc(b).norm_sqr();
            }
        }
        acc / (2.0 * (rep.order() as f64).powi(2))
    });

    Ok(OverlapEstimate { closed, double_sum })
}

/// Builds the saturating measurement seed `P = |U⟩⟩⟨⟨U|` from a maximally
/// entangled probe `E = U/√d`.
pub fn saturating_seed(probe: &ProbeState) -> Result<CMatrix> {
    let d = probe.dim();
    let u = probe.operator().map(|z| z * c((d as f64).sqrt(), 0.0));
    let deviation = linalg::unitarity_deviation(&u);
    if deviation > 1e-8 {
        return Err(Error::InvalidSeed {
            reason: format!(
                "probe is not maximally entangled (√d·E deviates from unitary by {deviation:.3e})"
            ),
        });
    }
    Ok(outer(&linalg::vec_op(&u)))
}

fn validate_seed(rep: &ProjectiveRep, p: &CMatrix) -> Result<()> {
    linalg::validate(p).map_err(|e| Error::InvalidSeed {
        reason: e.to_string(),
    })?;
    let d2 = rep.dim * rep.dim;
    if p.nrows() != d2 {
        return Err(Error::InvalidSeed {
            reason: format!("seed is {}×{}, expected {d2}×{d2}", p.nrows(), p.ncols()),
        });
    }
    let herm_dev = linalg::max_abs_diff(p, &p.adjoint());
    if herm_dev > tol::DECOMP {
        return Err(Error::InvalidSeed {
            reason: format!("seed is not Hermitian (deviation {herm_dev:.3e})"),
        });
    }
    let (eigs, _) = linalg::hermitian_eigen(p).map_err(|e| Error::InvalidSeed {
        reason: format!("seed eigendecomposition failed: {e}"),
    })?;
    let min_eig = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eig < -tol::DECOMP {
        return Err(Error::InvalidSeed {
            reason: format!("seed is not positive semidefinite (min eigenvalue {min_eig:.3e})"),
        });
    }
    let tr1 = linalg::partial_trace(p, Subsystem::First).map_err(|e| Error::InvalidSeed {
        reason: e.to_string(),
    })?;
    let dev = linalg::max_abs_diff(&tr1, &linalg::identity(rep.dim));
    if dev > 1e-8 {
        return Err(Error::InvalidSeed {
            reason: format!("Tr₁[P] deviates from identity by {dev:.3e}"),
        });
    }
    Ok(())
}

/// Likelihood `⟨⟨E|P|E⟩⟩` of the covariant POVM seed `P` at the true group
/// element. Bounded by `μ(G) = d`, with equality reachable only by
/// maximally entangled probes.
pub fn covariant_likelihood(rep: &ProjectiveRep, probe: &ProbeState, p: &CMatrix) -> Result<f64> {
    ensure_probe_dim(rep, probe)?;
    validate_seed(rep, p)?;
    let v = probe.state_vector();
    let value = v.dotc(&(p * &v));
    if value.im.abs() > tol::DECOMP {
        return Err(Error::Inconsistent {
            context: format!(
                "likelihood of a Hermitian seed came out complex (imag {:.3e})",
                value.im
            ),
        });
    }
    Ok(value.re)
}

/// `‖Σ_g μ(g)(U_g⊗I) P (U_g⊗I)† − I‖_max`: how far the seed is from
/// generating a complete covariant POVM.
pub fn povm_completeness_residual(rep: &ProjectiveRep, p: &CMatrix) -> Result<f64> {
    validate_seed(rep, p)?;
    let d = rep.dim;
    let d2 = d * d;
    let mu = c(rep.mu(), 0.0);
    let eye = linalg::identity(d);
    let mut acc = CMatrix::zeros(d2, d2);
    for u in &rep.elements {
        let big = linalg::kron(u, &eye);
        acc += (&big * p * big.adjoint()).map(|z| z * mu);
    }
    Ok(linalg::max_abs_diff(&acc, &linalg::identity(d2)))
}

/// Aggregate covariant-estimation summary for one representation and probe.
#[derive(Debug, Clone)]
pub struct CovariantReport {
    pub group_order: usize,
    pub dim: usize,
    pub dim_out: usize,
    pub chi: ChiEstimate,
    pub overlap: OverlapEstimate,
    /// Likelihood of the supplied seed, when one was given.
    pub likelihood: Option<f64>,
    /// POVM completeness residual of the supplied seed.
    pub povm_residual: Option<f64>,
}

/// Runs the full covariant analysis; `seed` optionally adds likelihood and
/// POVM completeness for a measurement seed.
pub fn analyze(
    rep: &ProjectiveRep,
    probe: &ProbeState,
    seed: Option<&CMatrix>,
) -> Result<CovariantReport> {
    let dim_out = output_dimension(rep, probe)?;
    let chi = holevo_chi(rep, probe)?;
    let overlap = average_overlap(rep, probe)?;
    let (likelihood, povm_residual) = match seed {
        Some(p) => (
            Some(covariant_likelihood(rep, probe, p)?),
            Some(povm_completeness_residual(rep, p)?),
        ),
        None => (None, None),
    };
    Ok(CovariantReport {
        group_order: rep.order(),
        dim: rep.dim(),
        dim_out,
        chi,
        overlap,
        likelihood,
        povm_residual,
    })
}
