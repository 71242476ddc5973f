//! Dense two-excitation Hamiltonian and its matrix-free action.

use crate::basis::{PairKind, TwoExcitationBasis};
use crate::error::Result;
use crate::linalg;
use crate::params::ModelParams;
use crate::state::TwoExcitationState;
use ndarray::{Array1, Array2};
use num_complex::Complex64;

/// Dense Hamiltonian over a [`TwoExcitationBasis`], built by bosonic
/// occupation-number algebra. Kept alongside its basis and parameters so
/// downstream code can pack/unpack states consistently.
#[derive(Clone, Debug)]
pub struct HamiltonianMatrix {
    entries: Array2<Complex64>,
    basis: TwoExcitationBasis,
    params: ModelParams,
}

/// Occupation-number image of a basis entry: per-site boson counts for each
/// species. Only ever holds two excitations in total.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Occupation {
    a: Vec<u8>,
    b: Vec<u8>,
}

impl Occupation {
    fn of_entry(kind: PairKind, n: usize, m: usize, sites: usize) -> Self {
        let mut occ = Occupation {
            a: vec![0; sites],
            b: vec![0; sites],
        };
        match kind {
            PairKind::AA => {
                occ.a[n] += 1;
                occ.a[m] += 1;
            }
            PairKind::AB => {
                occ.a[n] += 1;
                occ.b[m] += 1;
            }
            PairKind::BB => {
                occ.b[n] += 1;
                occ.b[m] += 1;
            }
        }
        occ
    }

    /// Canonical basis label of this occupation.
    fn entry(&self) -> (PairKind, usize, usize) {
        let a_sites: Vec<usize> = site_list(&self.a);
        let b_sites: Vec<usize> = site_list(&self.b);
        match (a_sites.len(), b_sites.len()) {
            (2, 0) => (PairKind::AA, a_sites[0], a_sites[1]),
            (0, 2) => (PairKind::BB, b_sites[0], b_sites[1]),
            (1, 1) => (PairKind::AB, a_sites[0], b_sites[0]),
            _ => unreachable!("two-excitation sector"),
        }
    }
}

fn site_list(occ: &[u8]) -> Vec<usize> {
    let mut out = Vec::with_capacity(2);
    for (site, &count) in occ.iter().enumerate() {
        for _ in 0..count {
            out.push(site);
        }
    }
    out
}

/// Builds the dense Hamiltonian for `params` (hard-core modes restrict the
/// basis rather than penalizing double occupancy).
pub fn build_hamiltonian(params: &ModelParams) -> Result<HamiltonianMatrix> {
    params.validate()?;
    let basis = TwoExcitationBasis::for_params(params)?;
    let dim = basis.dimension();
    let n = params.n;
    let mut h = Array2::<Complex64>::zeros((dim, dim));

    // Scatter `amp * |occ⟩` into column `col`, skipping states deleted by
    // hard-core restriction (that is exactly the projected Hamiltonian).
    let add = |h: &mut Array2<Complex64>, col: usize, occ: &Occupation, amp: f64| {
        let (kind, i, j) = occ.entry();
        if let Some(row) = basis.index_of(kind, i, j) {
            h[[row, col]] += Complex64::new(amp, 0.0);
        }
    };

    // One-boson move `site_from → site_to` of species `s` with standard
    // bosonic amplitudes √ν_from · √(ν_to + 1).
    let hop = |occ: &Occupation, s: PairKind, from: usize, to: usize| -> Option<(Occupation, f64)> {
        let mut out = occ.clone();
        let v = match s {
            PairKind::AA => &mut out.a,
            PairKind::BB => &mut out.b,
            PairKind::AB => unreachable!(),
        };
        if v[from] == 0 {
            return None;
        }
        let amp_down = (v[from] as f64).sqrt();
        v[from] -= 1;
        let amp_up = ((v[to] + 1) as f64).sqrt();
        v[to] += 1;
        Some((out, amp_down * amp_up))
    };

    for (col, e) in basis.entries().iter().enumerate() {
        let occ = Occupation::of_entry(e.kind, e.n, e.m, n);

        // Diagonal: Δ Σ n^a + (U₁/2) Σ n^a(n^a−1) + (U₂/2) Σ n^b(n^b−1) + U₃ Σ n^a n^b.
        let mut diag = 0.0;
        for site in 0..n {
            let (na, nb) = (occ.a[site] as f64, occ.b[site] as f64);
            diag += params.delta * na;
            if !params.u1_infinite {
                diag += 0.5 * params.u1 * na * (na - 1.0);
            }
            if !params.u2_infinite {
                diag += 0.5 * params.u2 * nb * (nb - 1.0);
            }
            diag += params.u3 * na * nb;
        }
        add(&mut h, col, &occ, diag);

        // Hopping: −J Σ_j (c†_j c_{j+1} + c†_{j+1} c_j), periodic.
        for j in 0..n {
            let j2 = (j + 1) % n;
            for (from, to) in [(j2, j), (j, j2)] {
                if let Some((out, amp)) = hop(&occ, PairKind::AA, from, to) {
                    add(&mut h, col, &out, -params.j1 * amp);
                }
                if let Some((out, amp)) = hop(&occ, PairKind::BB, from, to) {
                    add(&mut h, col, &out, -params.j2 * amp);
                }
            }
        }

        // Rabi conversion: Ω Σ_i (a†_i b_i + b†_i a_i).
        for site in 0..n {
            // a†_i b_i
            if occ.b[site] > 0 {
                let mut out = occ.clone();
                let amp = (out.b[site] as f64).sqrt();
                out.b[site] -= 1;
                let amp = amp * ((out.a[site] + 1) as f64).sqrt();
                out.a[site] += 1;
                add(&mut h, col, &out, params.omega * amp);
            }
            // b†_i a_i
            if occ.a[site] > 0 {
                let mut out = occ.clone();
                let amp = (out.a[site] as f64).sqrt();
                out.a[site] -= 1;
                let amp = amp * ((out.b[site] + 1) as f64).sqrt();
                out.b[site] += 1;
                add(&mut h, col, &out, params.omega * amp);
            }
        }
    }

    Ok(HamiltonianMatrix {
        entries: h,
        basis,
        params: *params,
    })
}

impl HamiltonianMatrix {
    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn basis(&self) -> &TwoExcitationBasis {
        &self.basis
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn dimension(&self) -> usize {
        self.basis.dimension()
    }

    /// max |H − H†|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let dim = self.dimension();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                worst = worst.max((self.entries[[i, j]] - self.entries[[j, i]].conj()).norm());
            }
        }
        worst
    }

    /// Permutation matrix of the one-site translation on this basis.
    pub fn translation_matrix(&self) -> Array2<Complex64> {
        let dim = self.dimension();
        let mut t = Array2::zeros((dim, dim));
        for pos in 0..dim {
            t[[self.basis.translated_index(pos), pos]] = Complex64::new(1.0, 0.0);
        }
        t
    }

    /// max |HT − TH| — translation invariance of the chain.
    pub fn translation_commutator_norm(&self) -> f64 {
        let t = self.translation_matrix();
        let ht = self.entries.dot(&t);
        let th = t.dot(&self.entries);
        ht.iter()
            .zip(th.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0f64, f64::max)
    }

    /// All eigenvalues (ascending).
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let (vals, _) = linalg::eigh(&self.entries)?;
        Ok(vals.to_vec())
    }

    /// Full eigendecomposition: ascending eigenvalues and the unitary of
    /// eigenvectors as columns.
    pub fn eigensystem(&self) -> Result<(Array1<f64>, Array2<Complex64>)> {
        linalg::eigh(&self.entries)
    }
}

/// Matrix-free action of the Hamiltonian on amplitude matrices:
///
/// (Hψ)_A = −J₁ S·A − J₁ A·S + 2Δ A + U₁ diag(A) + Ω B_s
/// (Hψ)_B = −J₁ S·B − J₂ B·S +  Δ B + U₃ diag(B) + 2Ω (A + C)
/// (Hψ)_C = −J₂ S·C − J₂ C·S        + U₂ diag(C) + Ω B_s
///
/// where S is the periodic nearest-neighbor shift sum and diag(·) keeps only
/// the same-site entries. In hard-core mode the same-site aa/bb amplitudes
/// are projected out before and after (the interaction term is dropped).
///
/// This is an independent implementation of the same physics as
/// [`build_hamiltonian`] and is used for cheap residual checks of analytic
/// eigenstates.
pub fn apply_h(params: &ModelParams, state: &TwoExcitationState) -> TwoExcitationState {
    let n = state.n();
    let mut a = state.a.clone();
    let mut c = state.c.clone();
    if params.u1_infinite {
        for i in 0..n {
            a[[i, i]] = Complex64::new(0.0, 0.0);
        }
    }
    if params.u2_infinite {
        for i in 0..n {
            c[[i, i]] = Complex64::new(0.0, 0.0);
        }
    }
    let b = &state.b;
    let bs = (b + &b.t()) * Complex64::new(0.5, 0.0);

    let mut out = TwoExcitationState::zero(n);
    let up = |i: usize| (i + 1) % n;
    let dn = |i: usize| (i + n - 1) % n;

    for i in 0..n {
        for j in 0..n {
            let hop_a = a[[dn(i), j]] + a[[up(i), j]] + a[[i, dn(j)]] + a[[i, up(j)]];
            let mut va = -params.j1 * hop_a + 2.0 * params.delta * a[[i, j]];
            if i == j && !params.u1_infinite {
                va += params.u1 * a[[i, i]];
            }
            va += params.omega * bs[[i, j]];
            out.a[[i, j]] = va;

            let hop_b1 = b[[dn(i), j]] + b[[up(i), j]];
            let hop_b2 = b[[i, dn(j)]] + b[[i, up(j)]];
            let mut vb =
                -params.j1 * hop_b1 - params.j2 * hop_b2 + params.delta * b[[i, j]];
            if i == j {
                vb += params.u3 * b[[i, i]];
            }
            vb += 2.0 * params.omega * (a[[i, j]] + c[[i, j]]);
            out.b[[i, j]] = vb;

            let hop_c = c[[dn(i), j]] + c[[up(i), j]] + c[[i, dn(j)]] + c[[i, up(j)]];
            let mut vc = -params.j2 * hop_c;
            if i == j && !params.u2_infinite {
                vc += params.u2 * c[[i, i]];
            }
            vc += params.omega * bs[[i, j]];
            out.c[[i, j]] = vc;
        }
    }

    if params.u1_infinite {
        for i in 0..n {
            out.a[[i, i]] = Complex64::new(0.0, 0.0);
        }
    }
    if params.u2_infinite {
        for i in 0..n {
            out.c[[i, i]] = Complex64::new(0.0, 0.0);
        }
    }
    out
}

/// max-norm of (H − ε)ψ, the cheap eigenstate residual used to accept or
/// reject analytically assembled states.
pub fn eigen_residual(params: &ModelParams, state: &TwoExcitationState, eps: f64) -> f64 {
    let mut r = apply_h(params, state);
    r.axpy(Complex64::new(-eps, 0.0), state);
    r.amplitude_max()
}
