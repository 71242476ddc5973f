//! Stationary-state diagnostics.
//!
//! Three families of observables act on a normalized [`TwoExcitationState`]:
//!
//! * [`ipr`] — the inverse participation ratio over physical pair
//!   configurations.  A state concentrated on one configuration scores 1; a
//!   state uniformly spread over the interspecies block scores `1/N²`; a
//!   ring-delocalized on-site pair scores `1/N`.
//! * [`entanglement_entropy`] — von Neumann entropy of a reduced density
//!   matrix, either across the species cut ([`EntanglementCut::Coupled`]) or
//!   between the two identical particles of a single-species state
//!   ([`EntanglementCut::SingleSpecies`]).
//! * [`n_db`] / [`n_db_linear`] — on-site interspecies pair population.
//!
//! All entropies are reported in nats.

use crate::error::{Error, Result};
use crate::linalg::eigh;
use crate::state::TwoExcitationState;
use ndarray::Array2;
use num_complex::Complex64;

/// Tolerance on |‖ψ‖² − 1| beyond which a state is rejected.
const NORM_TOL: f64 = 1e-8;
/// Reduced-density-matrix eigenvalues at or below this floor contribute zero
/// entropy (they are numerical noise around rank deficiencies).
const EIGENVALUE_FLOOR: f64 = 1e-14;
/// Largest block amplitude tolerated in blocks required to vanish.
const BLOCK_ZERO_TOL: f64 = 1e-12;

/// Which bipartition the entanglement entropy refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntanglementCut {
    /// Trace out one species of the driven two-species state.
    Coupled,
    /// Split a two-particle state of a single species between its two
    /// (identical) particles.  Requires `B = C = 0`.
    SingleSpecies,
}

/// Block-resolved species entanglement of a two-excitation state.
///
/// The reduced density matrix of species *a* is block diagonal in the number
/// of *a* excitations: a pure two-`a` block of weight `lambda_a`, a genuinely
/// mixed one-`a` block `B B†`, and a pure zero-`a` block of weight
/// `lambda_c`.  `s2`, `s1`, `s0` are the respective block contributions and
/// `s_total` is their sum.
#[derive(Debug, Clone, Copy)]
pub struct EntanglementReport {
    /// Weight `2 Σ|A|²` of the two-`a` (drive-vacuum for species b) block.
    pub lambda_a: f64,
    /// Weight `2 Σ|C|²` of the two-`b` block.
    pub lambda_c: f64,
    /// Entropy contribution of the zero-`a` block: `−λ_c ln λ_c`.
    pub s0: f64,
    /// Entropy contribution of the one-`a` block: `−Tr BB† ln BB†`.
    pub s1: f64,
    /// Entropy contribution of the two-`a` block: `−λ_a ln λ_a`.
    pub s2: f64,
    /// Total von Neumann entropy of the cut, in nats.
    pub s_total: f64,
}

fn ensure_normalized(state: &TwoExcitationState) -> Result<()> {
    let norm_sq = state.weighted_norm_sq();
    if (norm_sq - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm_sq));
    }
    Ok(())
}

/// Inverse participation ratio over physical pair configurations,
/// `Σ 4|A_{nm}|⁴ + |B_{nm}|⁴ + 4|C_{nm}|⁴`.
///
/// The same-species blocks are stored as full symmetric matrices, so each
/// unordered pair appears twice with physical amplitude `√2 A_{nm}`; the
/// factor 4 = 2²/2 · 2 keeps the score of a single occupied configuration at
/// 1 regardless of which block hosts it.
pub fn ipr(state: &TwoExcitationState) -> Result<f64> {
    ensure_normalized(state)?;
    let quartic = |m: &Array2<Complex64>| -> f64 {
        m.iter()
            .map(|z| {
                let w = z.norm_sqr();
                w * w
            })
            .sum()
    };
    Ok(4.0 * quartic(&state.a) + quartic(&state.b) + 4.0 * quartic(&state.c))
}

/// `−w ln w` with the zero-weight limit handled exactly.
fn shannon_term(w: f64) -> f64 {
    if w <= EIGENVALUE_FLOOR {
        0.0
    } else {
        -w * w.ln()
    }
}

/// Entropy of a Hermitian positive-semidefinite matrix via its spectrum.
fn spectrum_entropy(rho: &Array2<Complex64>) -> Result<f64> {
    let (vals, _) = eigh(rho)?;
    Ok(vals.iter().copied().map(shannon_term).sum())
}

/// Conjugate-transpose product `M M†`.
fn gram(m: &Array2<Complex64>) -> Array2<Complex64> {
    let mh = m.t().mapv(|z| z.conj());
    m.dot(&mh)
}

/// Von Neumann entanglement entropy of `state` across the requested cut.
///
/// * `Coupled`: trace out species *b*.  Because the *a*-excitation number is
///   conserved by the cut, the reduced matrix splits into three blocks whose
///   entropies are reported separately (see [`EntanglementReport`]).
/// * `SingleSpecies`: the state must live entirely in the two-`a` block
///   (`B = C = 0`, enforced within 1e-12), and the entropy of one particle
///   with respect to the other is `−Tr ρ ln ρ` with `ρ = 2 A A†`.  A
///   symmetric rank-1 amplitude (a doubly occupied orbital) has entropy 0.
///   The result is reported in `s1`/`s_total` with `s0 = s2 = 0`.
pub fn entanglement_entropy(
    state: &TwoExcitationState,
    cut: EntanglementCut,
) -> Result<EntanglementReport> {
    ensure_normalized(state)?;
    let weight = |m: &Array2<Complex64>| -> f64 { m.iter().map(|z| z.norm_sqr()).sum() };
    match cut {
        EntanglementCut::Coupled => {
            let lambda_a = 2.0 * weight(&state.a);
            let lambda_c = 2.0 * weight(&state.c);
            let s0 = shannon_term(lambda_c);
            let s2 = shannon_term(lambda_a);
            let s1 = spectrum_entropy(&gram(&state.b))?;
            Ok(EntanglementReport {
                lambda_a,
                lambda_c,
                s0,
                s1,
                s2,
                s_total: s0 + s1 + s2,
            })
        }
        EntanglementCut::SingleSpecies => {
            let stray = state
                .b
                .iter()
                .chain(state.c.iter())
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            if stray > BLOCK_ZERO_TOL {
                return Err(Error::WrongMode(format!(
                    "single-species cut requires vanishing B and C blocks; \
                     largest stray amplitude is {stray:.3e}"
                )));
            }
            let rho = gram(&state.a).mapv(|z| z * 2.0);
            let s1 = spectrum_entropy(&rho)?;
            Ok(EntanglementReport {
                lambda_a: 2.0 * weight(&state.a),
                lambda_c: 0.0,
                s0: 0.0,
                s1,
                s2: 0.0,
                s_total: s1,
            })
        }
    }
}

/// On-site interspecies pair population `Σ_i |B_{ii}|⁴`.
///
/// This quartic form scores a ring-delocalized on-site pair as `1/N`; the
/// companion [`n_db_linear`] scores the same state as 1 and is the quantity
/// whose quench traces saturate near 1 deep in the paired regime.
pub fn n_db(state: &TwoExcitationState) -> Result<f64> {
    ensure_normalized(state)?;
    Ok(state
        .b
        .diag()
        .iter()
        .map(|z| {
            let w = z.norm_sqr();
            w * w
        })
        .sum())
}

/// On-site interspecies pair probability `Σ_i |B_{ii}|²`.
pub fn n_db_linear(state: &TwoExcitationState) -> Result<f64> {
    ensure_normalized(state)?;
    Ok(state.b.diag().iter().map(|z| z.norm_sqr()).sum())
}
