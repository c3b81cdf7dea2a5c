//! Optimal discrimination of two known unitaries.
//!
//! Everything reduces to the geometry of the relative operator `W = U₂†U₁`.
//! Its eigenphases `γⱼ` place unit-circle vertices `e^{iγⱼ}` whose convex
//! hull `K` decides the problem: with probe weights `wⱼ` on the eigenspaces,
//! the achievable inner products are exactly `z = Σ wⱼ e^{iγⱼ} ∈ K`, and the
//! minimum error probability for the best measurement is
//! `P_E = ½(1 − √(1 − |z|²))`. The optimal probe therefore picks the point
//! of `K` closest to the origin: distance `r = 0` (perfect, single-shot
//! discrimination) exactly when `K` contains the origin, which happens
//! exactly when the phase spread `Δ` reaches `π`.
//!
//! The spread is computed from the circular gap structure: `Δ = 2π − G`
//! where `G` is the largest gap between adjacent eigenphases. That covering
//! arc is the single source of truth; `r = cos(Δ/2)` holds when the extremal
//! chord is closest, and is exercised as an oracle in tests rather than
//! assumed here.
//!
//! No ancilla is needed for the optimum: the probe `|ψ⟩ = Σ √wⱼ |γⱼ⟩` is
//! local, and `entanglement_invariance_check` verifies numerically that
//! extending to `W ⊗ I` leaves `r` unchanged.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, c, eig_unitary, CMatrix, CVector, EigenSystem};
use crate::tol;

/// Phase comparisons against the `Δ = π` threshold use this slack.
const ANGLE_TOL: f64 = tol::PHASE_MERGE;

/// Largest direct tensor-power dimension verified eigenvalue-by-eigenvalue.
pub const DIRECT_DIM_CAP: usize = 256;

/// Distinct relative eigenphases with multiplicities.
#[derive(Debug, Clone)]
pub struct PhaseSet {
    /// Distinct phases in `[0, 2π)`, strictly ascending.
    pub phases: Vec<f64>,
    /// Multiplicity of each phase; sums to the dimension.
    pub multiplicities: Vec<usize>,
}

impl PhaseSet {
    /// Underlying Hilbert space dimension.
    pub fn dim(&self) -> usize {
        self.multiplicities.iter().sum()
    }
}

/// The eigenphase polygon `K`: convex hull of `{e^{iγⱼ}}`.
#[derive(Debug, Clone)]
pub struct PolygonK {
    /// Hull vertices `e^{iγⱼ}` in angular order.
    pub vertices: Vec<Complex64>,
    /// Phase spread `Δ ∈ [0, 2π]`.
    pub spread: f64,
    /// True iff the origin lies in `K` (iff `Δ ≥ π` within tolerance).
    pub contains_origin: bool,
    /// Distance from the origin to `K`; zero iff `contains_origin`.
    pub r: f64,
    /// Point of `K` closest to the origin.
    pub closest_point: Complex64,
}

/// Optimal local probe: weights over distinct eigenspaces plus the state.
#[derive(Debug, Clone)]
pub struct LocalProbe {
    /// Weight on each distinct phase, aligned with `PhaseSet::phases`.
    pub weights: Vec<f64>,
    /// `|ψ⟩ = Σ √wⱼ |γⱼ⟩`, unit norm, in the d-dimensional probe space.
    pub psi: CVector,
}

/// Full single-copy discrimination summary for a pair of unitaries.
#[derive(Debug, Clone)]
pub struct DiscriminationReport {
    /// Hilbert space dimension.
    pub dim: usize,
    /// Phase spread `Δ` of `W = U₂†U₁`.
    pub delta: f64,
    /// Distance from origin to the eigenphase polygon.
    pub r: f64,
    /// Minimum error probability `½(1 − √(1 − r²))`.
    pub p_error: f64,
    /// Smallest copy count with `N·Δ ≥ π`; `None` when `Δ = 0`.
    pub n_bar: Option<u32>,
    /// True iff single-shot perfect discrimination is possible (`r = 0`).
    pub exact: bool,
    /// The probe achieving `p_error`.
    pub probe: LocalProbe,
    /// Distinct relative phases.
    pub phases: PhaseSet,
    /// The polygon geometry behind `r`.
    pub polygon: PolygonK,
}

/// One row of an N-copy sweep.
#[derive(Debug, Clone)]
pub struct NCopiesRow {
    pub n: u32,
    /// Closed-form spread `min(N·Δ, 2π)`.
    pub delta: f64,
    /// Spread recomputed from the explicit tensor power, when small enough.
    pub delta_direct: Option<f64>,
    /// Polygon distance at this copy count.
    pub r: f64,
    /// Error probability at this copy count.
    pub p_error: f64,
}

/// N-copy discrimination sweep.
#[derive(Debug, Clone)]
pub struct NCopiesAnalysis {
    /// Smallest `N` with `N·Δ ≥ π`; `None` when `Δ = 0`.
    pub n_bar: Option<u32>,
    pub rows: Vec<NCopiesRow>,
}

fn wrap_tau(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y >= TAU {
        0.0
    } else {
        y
    }
}

fn wrap_pm_pi(x: f64) -> f64 {
    let y = wrap_tau(x);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

fn ensure_unitary_pair(u1: &CMatrix, u2: &CMatrix) -> Result<()> {
    linalg::validate(u1)?;
    linalg::validate(u2)?;
    if u1.nrows() != u2.nrows() {
        return Err(Error::DimensionMismatch {
            left: u1.nrows(),
            right: u2.nrows(),
        });
    }
    for u in [u1, u2] {
        let deviation = linalg::unitarity_deviation(u);
        if deviation > tol::DECOMP {
            return Err(Error::NotUnitary {
                deviation,
                tol: tol::DECOMP,
            });
        }
    }
    Ok(())
}

/// Merges raw phases into distinct clusters (circular chain merge at `tol`),
/// returning `(representative phase, member indices)` sorted by phase.
fn merge_phases(raw: &[f64], tolerance: f64) -> PhaseClusters {
    let n = raw.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw[a].partial_cmp(&raw[b]).unwrap());

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &idx in &order {
        match clusters.last_mut() {
            Some(cluster)
                if raw[idx] - raw[*cluster.last().unwrap()] <= tolerance =>
            {
                cluster.push(idx)
            }
            _ => clusters.push(vec![idx]),
        }
    }
    // 0 and 2π identify: merge the endpoints when the wrap gap closes.
    if clusters.len() > 1 {
        let lo = raw[clusters[0][0]];
        let hi = raw[*clusters.last().unwrap().last().unwrap()];
        if lo + TAU - hi <= tolerance {
            let tail = clusters.pop().unwrap();
            clusters[0].splice(0..0, tail);
        }
    }

    let mut out: Vec<(f64, Vec<usize>)> = clusters
        .into_iter()
        .map(|members| {
            let p0 = raw[members[0]];
            let mean_offset = members
                .iter()
                .map(|&i| wrap_pm_pi(raw[i] - p0))
                .sum::<f64>()
                / members.len() as f64;
            (wrap_tau(p0 + mean_offset), members)
        })
        .collect();
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// `(representative phase, eigenvector column indices)` per distinct phase.
type PhaseClusters = Vec<(f64, Vec<usize>)>;

fn phase_set_of(w: &CMatrix) -> Result<(PhaseSet, EigenSystem, PhaseClusters)> {
    let eig = eig_unitary(w)?;
    let clusters = merge_phases(&eig.phases(), tol::PHASE_MERGE);
    let ps = PhaseSet {
        phases: clusters.iter().map(|(p, _)| *p).collect(),
        multiplicities: clusters.iter().map(|(_, m)| m.len()).collect(),
    };
    Ok((ps, eig, clusters))
}

/// Distinct eigenphases of `W = U₂†U₁` with multiplicities, merged at
/// [`tol::PHASE_MERGE`].
pub fn relative_phases(u1: &CMatrix, u2: &CMatrix) -> Result<PhaseSet> {
    ensure_unitary_pair(u1, u2)?;
    let w = u2.adjoint() * u1;
    Ok(phase_set_of(&w)?.0)
}

/// Phase spread `Δ = 2π − G` with `G` the largest circular gap.
pub fn spread(ps: &PhaseSet) -> f64 {
    let g = circular_gaps(&ps.phases);
    match g.iter().cloned().fold(f64::NAN, f64::max) {
        x if x.is_nan() => 0.0,
        largest => (TAU - largest).max(0.0),
    }
}

/// Circular gaps between adjacent sorted phases; a single phase has the full
/// `2π` wrap gap.
fn circular_gaps(phases: &[f64]) -> Vec<f64> {
    let m = phases.len();
    if m == 0 {
        return vec![];
    }
    if m == 1 {
        return vec![TAU];
    }
    let mut gaps = Vec::with_capacity(m);
    for k in 0..m - 1 {
        gaps.push(phases[k + 1] - phases[k]);
    }
    gaps.push(phases[0] + TAU - phases[m - 1]);
    gaps
}

/// Closest point to the origin on the segment `[a, b]`, with the parameter
/// `t ∈ [0, 1]` such that the point is `a + t(b − a)`.
fn closest_on_segment(a: Complex64, b: Complex64) -> (Complex64, f64) {
    let d = b - a;
    let len2 = d.norm_sqr();
    let t = if len2 > 0.0 {
        ((-(a.conj() * d).re) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (a + d * Complex64::new(t, 0.0), t)
}

/// Builds the eigenphase polygon for a phase set.
pub fn polygon(ps: &PhaseSet) -> PolygonK {
    let vertices: Vec<Complex64> = ps
        .phases
        .iter()
        .map(|&p| Complex64::from_polar(1.0, p))
        .collect();
    let delta = spread(ps);
    let contains_origin = delta >= PI - ANGLE_TOL;
    if contains_origin {
        return PolygonK {
            vertices,
            spread: delta,
            contains_origin: true,
            r: 0.0,
            closest_point: Complex64::ZERO,
        };
    }
    let m = vertices.len();
    if m == 0 {
        return PolygonK {
            vertices,
            spread: delta,
            contains_origin: false,
            r: 0.0,
            closest_point: Complex64::ZERO,
        };
    }
    if m == 1 {
        return PolygonK {
            closest_point: vertices[0],
            vertices: vertices.clone(),
            spread: delta,
            contains_origin: false,
            r: 1.0,
        };
    }
    let mut best = (f64::INFINITY, Complex64::ZERO);
    for k in 0..m {
        let (p, _) = closest_on_segment(vertices[k], vertices[(k + 1) % m]);
        let dist = p.norm();
        if dist < best.0 {
            best = (dist, p);
        }
    }
    PolygonK {
        vertices,
        spread: delta,
        contains_origin: false,
        r: best.0,
        closest_point: best.1,
    }
}

/// `P_E = ½(1 − √(1 − z²))` for an overlap magnitude `z ∈ [0, 1]`.
pub fn p_error_from_overlap(z: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::OutOfRange {
            value: z,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(0.5 * (1.0 - (1.0 - z * z).sqrt()))
}

fn p_error_clamped(r: f64) -> f64 {
    0.5 * (1.0 - (1.0 - r.clamp(0.0, 1.0).powi(2)).sqrt())
}

fn n_bar_from_delta(delta: f64) -> Option<u32> {
    if delta <= ANGLE_TOL {
        return None;
    }
    let n = ((PI - 1e-9) / delta).ceil().max(1.0);
    Some(n as u32)
}

/// Weights on the polygon vertices whose convex combination reaches
/// `poly.closest_point` (or the origin when `K` contains it).
fn optimal_weights(poly: &PolygonK) -> Result<Vec<f64>> {
    let m = poly.vertices.len();
    let mut weights = vec![0.0f64; m];
    if m == 1 {
        weights[0] = 1.0;
        return Ok(weights);
    }
    if !poly.contains_origin {
        // Re-scan edges for the argmin with its interpolation parameter.
        let mut best = (f64::INFINITY, 0usize, 0.0f64);
        for k in 0..m {
            let (p, t) = closest_on_segment(poly.vertices[k], poly.vertices[(k + 1) % m]);
            if p.norm() < best.0 {
                best = (p.norm(), k, t);
            }
        }
        let (_, k, t) = best;
        weights[k] += 1.0 - t;
        weights[(k + 1) % m] += t;
        return Ok(weights);
    }
    // Origin inside K. First try each edge: if the origin sits on one, two
    // weights suffice. The threshold tolerates the Δ ≈ π boundary where the
    // origin is within ~1e-9 of the closing chord.
    for k in 0..m {
        let a = poly.vertices[k];
        let b = poly.vertices[(k + 1) % m];
        let (p, t) = closest_on_segment(a, b);
        if p.norm() <= 1e-7 {
            weights[k] += 1.0 - t;
            weights[(k + 1) % m] += t;
            return Ok(weights);
        }
    }
    // Interior: fan-triangulate from vertex 0 and solve barycentric
    // coordinates for the triangle containing the origin.
    let v0 = poly.vertices[0];
    for i in 1..m - 1 {
        let va = poly.vertices[i];
        let vb = poly.vertices[i + 1];
        let m00 = (va - v0).re;
        let m01 = (vb - v0).re;
        let m10 = (va - v0).im;
        let m11 = (vb - v0).im;
        let det = m00 * m11 - m01 * m10;
        if det.abs() < 1e-14 {
            continue;
        }
        let rhs = (-v0.re, -v0.im);
        let beta = (rhs.0 * m11 - rhs.1 * m01) / det;
        let gamma = (m00 * rhs.1 - m10 * rhs.0) / det;
        let alpha = 1.0 - beta - gamma;
        if alpha >= -1e-9 && beta >= -1e-9 && gamma >= -1e-9 {
            let mut w = vec![0.0f64; m];
            w[0] = alpha.max(0.0);
            w[i] = beta.max(0.0);
            w[i + 1] = gamma.max(0.0);
            let total: f64 = w.iter().sum();
            for x in &mut w {
                *x /= total;
            }
            return Ok(w);
        }
    }
    Err(Error::Inconsistent {
        context: "origin reported inside the eigenphase polygon but no \
                  containing triangle was found"
            .into(),
    })
}

/// Computes the optimal probe and the full discrimination report for a pair
/// of unitaries.
///
/// The probe weights live on the distinct eigenspaces of `W = U₂†U₁`; inside
/// a degenerate eigenspace the first column of the orthonormalized cluster
/// is used, a harmless convention since any unit vector in the eigenspace
/// performs identically.
pub fn optimal_probe(u1: &CMatrix, u2: &CMatrix) -> Result<DiscriminationReport> {
    ensure_unitary_pair(u1, u2)?;
    let w = u2.adjoint() * u1;
    let (ps, eig, clusters) = phase_set_of(&w)?;
    let poly = polygon(&ps);
    let weights = optimal_weights(&poly)?;

    let d = w.nrows();
    let mut psi = CVector::zeros(d);
    for (weight, (_, members)) in weights.iter().zip(clusters.iter()) {
        if *weight <= 0.0 {
            continue;
        }
        let col = *members.iter().min().unwrap();
        let amp = c(weight.sqrt(), 0.0);
        psi += eig.eigenvectors.column(col).map(|x| x * amp);
    }
    let norm = psi.norm();
    if norm > 0.0 {
        psi = psi.map(|x| x / c(norm, 0.0));
    }

    let delta = poly.spread;
    let r = poly.r;
    Ok(DiscriminationReport {
        dim: d,
        delta,
        r,
        p_error: p_error_clamped(r),
        n_bar: n_bar_from_delta(delta),
        exact: poly.contains_origin,
        probe: LocalProbe { weights, psi },
        phases: ps,
        polygon: poly,
    })
}

/// Minimum error probability for discriminating two equiprobable pure
/// states, by explicit diagonalization of `(ρ₁ − ρ₂)/2`.
///
/// This is a closed-form-free oracle: `P_E = ½ − ½ Σⱼ |λⱼ|` over the
/// eigenvalues of the Helstrom operator.
pub fn helstrom_oracle(phi1: &CVector, phi2: &CVector) -> Result<f64> {
    if phi1.len() != phi2.len() {
        return Err(Error::DimensionMismatch {
            left: phi1.len(),
            right: phi2.len(),
        });
    }
    for phi in [phi1, phi2] {
        let norm = phi.norm();
        if (norm - 1.0).abs() > tol::DECOMP {
            return Err(Error::NotNormalized { norm });
        }
    }
    let d = phi1.len();
    let gamma = CMatrix::from_fn(d, d, |i, j| {
        (phi1[i] * phi1[j].conj() - phi2[i] * phi2[j].conj()) * c(0.5, 0.0)
    });
    let (eigenvalues, _) = linalg::hermitian_eigen(&gamma)?;
    let trace_norm: f64 = eigenvalues.iter().map(|l| l.abs()).sum();
    Ok(0.5 - 0.5 * trace_norm)
}

/// Recomputes the polygon distance after extending `W` to `W ⊗ I`, returning
/// `(r, r_extended)`. Attaching an unused ancilla cannot help, so the two
/// must agree; callers assert the tolerance.
pub fn entanglement_invariance_check(u1: &CMatrix, u2: &CMatrix) -> Result<(f64, f64)> {
    ensure_unitary_pair(u1, u2)?;
    let w = u2.adjoint() * u1;
    let r_single = polygon(&phase_set_of(&w)?.0).r;
    let extended = linalg::kron(&w, &linalg::identity(w.nrows()));
    let r_extended = polygon(&phase_set_of(&extended)?.0).r;
    Ok((r_single, r_extended))
}

/// N-copy sweep: closed-form spread `Δ_N = min(N·Δ, 2π)` per row, verified
/// against the explicit tensor power wherever that is feasible and provably
/// comparable.
///
/// The closed form tracks the covering arc `N·Δ` of the set `{Σ γ}` of
/// N-fold phase sums; once that arc wraps far enough to collide with the
/// single-copy gap structure (`N·Δ > 2π − g₁`, `g₁` the largest internal
/// gap), re-entrant phase sums can shrink the literal gap-based spread of
/// the tensor power below `N·Δ` while leaving the discrimination geometry
/// (`Δ ≥ π`, hence `r` and `P_E`) unchanged. The direct comparison is
/// therefore gated to the regime where equality is a theorem; a mismatch
/// there is a genuine inconsistency.
pub fn n_copies_analysis(u1: &CMatrix, u2: &CMatrix, n_max: u32) -> Result<NCopiesAnalysis> {
    if n_max < 1 {
        return Err(Error::OutOfRange {
            value: n_max as f64,
            lo: 1.0,
            hi: u32::MAX as f64,
        });
    }
    ensure_unitary_pair(u1, u2)?;
    let w = u2.adjoint() * u1;
    let d = w.nrows();
    let (ps, _, _) = phase_set_of(&w)?;
    let delta1 = spread(&ps);

    let gaps = {
        let mut g = circular_gaps(&ps.phases);
        g.sort_by(|a, b| b.partial_cmp(a).unwrap());
        g
    };
    let g1 = gaps.get(1).copied().unwrap_or(0.0);

    let mut rows = Vec::with_capacity(n_max as usize);
    let mut power: Option<CMatrix> = None;
    for n in 1..=n_max {
        let delta_n = (n as f64 * delta1).min(TAU);
        let dim_n = (d as f64).powi(n as i32);
        let delta_direct = if dim_n <= DIRECT_DIM_CAP as f64 {
            let wn = match power.take() {
                None => w.clone(),
                Some(prev) => linalg::kron(&prev, &w),
            };
            let direct = spread(&phase_set_of(&wn)?.0);
            power = Some(wn);
            Some(direct)
        } else {
            None
        };

        if let Some(direct) = delta_direct {
            let provable = n as f64 * delta1 <= TAU - g1 + ANGLE_TOL;
            if provable && (direct - delta_n).abs() > ANGLE_TOL {
                return Err(Error::Inconsistent {
                    context: format!(
                        "closed-form spread {delta_n:.12} disagrees with the \
                         direct tensor-power spread {direct:.12} at N = {n}"
                    ),
                });
            }
        }

        let r = if delta_n >= PI - ANGLE_TOL {
            0.0
        } else {
            (delta_n / 2.0).cos()
        };
        rows.push(NCopiesRow {
            n,
            delta: delta_n,
            delta_direct,
            r,
            p_error: p_error_clamped(r),
        });
    }

    Ok(NCopiesAnalysis {
        n_bar: n_bar_from_delta(delta1),
        rows,
    })
}

/// Brute-force oracle: minimum Helstrom error over a dense grid of probe
/// weight vectors on the eigenspaces of `W`.
///
/// The achievable overlap depends only on the weights, so the grid lives on
/// the probability simplex over distinct phases. At least `min_samples`
/// points are evaluated (exhaustively for one to three distinct phases,
/// seeded Dirichlet samples plus simplex corners beyond that).
pub fn grid_min_error(u1: &CMatrix, u2: &CMatrix, min_samples: usize) -> Result<f64> {
    ensure_unitary_pair(u1, u2)?;
    let w = u2.adjoint() * u1;
    let (_, eig, clusters) = phase_set_of(&w)?;
    let m = clusters.len();
    let d = w.nrows();

    let reps: Vec<CVector> = clusters
        .iter()
        .map(|(_, members)| {
            eig.eigenvectors
                .column(*members.iter().min().unwrap())
                .into_owned()
        })
        .collect();

    let grid = simplex_grid(m, min_samples.max(1));
    let best = grid
        .par_iter()
        .map(|weights| {
            let mut psi = CVector::zeros(d);
            for (weight, rep) in weights.iter().zip(reps.iter()) {
                if *weight > 0.0 {
                    let amp = c(weight.sqrt(), 0.0);
                    psi += rep.map(|x| x * amp);
                }
            }
            let norm = psi.norm();
            psi = psi.map(|x| x / c(norm, 0.0));
            let phi1 = u1 * &psi;
            let phi2 = u2 * &psi;
            helstrom_oracle(&phi1, &phi2).expect("grid states are normalized")
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best)
}

/// Weight vectors covering the `(m−1)`-simplex.
fn simplex_grid(m: usize, min_samples: usize) -> Vec<Vec<f64>> {
    match m {
        0 => vec![],
        1 => vec![vec![1.0]],
        2 => {
            let k = min_samples.max(2);
            (0..k)
                .map(|i| {
                    let t = i as f64 / (k - 1) as f64;
                    vec![1.0 - t, t]
                })
                .collect()
        }
        3 => {
            // Smallest triangular grid with at least min_samples nodes.
            let mut n_div = 1usize;
            while (n_div + 1) * (n_div + 2) / 2 < min_samples {
                n_div += 1;
            }
            let mut out = Vec::with_capacity((n_div + 1) * (n_div + 2) / 2);
            for i in 0..=n_div {
                for j in 0..=(n_div - i) {
                    let k = n_div - i - j;
                    out.push(vec![
                        i as f64 / n_div as f64,
                        j as f64 / n_div as f64,
                        k as f64 / n_div as f64,
                    ]);
                }
            }
            out
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_u64);
            let mut out = Vec::with_capacity(min_samples + m + 1);
            for i in 0..m {
                let mut corner = vec![0.0; m];
                corner[i] = 1.0;
                out.push(corner);
            }
            out.push(vec![1.0 / m as f64; m]);
            while out.len() < min_samples + m + 1 {
                // Dirichlet(1,…,1) via normalized exponentials.
                let mut v: Vec<f64> = (0..m)
                    .map(|_| -(rand::Rng::gen::<f64>(&mut rng).max(1e-300)).ln())
                    .collect();
                let total: f64 = v.iter().sum();
                for x in &mut v {
                    *x /= total;
                }
                out.push(v);
            }
            out
        }
    }
}
