//! Ordered pair basis of the two-excitation sector and packing between
//! amplitude matrices and coefficient vectors.

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::state::TwoExcitationState;
use ndarray::Array1;
use num_complex::Complex64;
use std::collections::HashMap;

/// Species content of a basis pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairKind {
    /// Two a-bosons.
    AA,
    /// One a-boson and one b-boson.
    AB,
    /// Two b-bosons.
    BB,
}

/// One normalized basis state: a pair of bosons at sites (n, m).
///
/// For `AA`/`BB` the labels satisfy n ≤ m (the particles are identical);
/// `AB` pairs are unrestricted since the species distinguishes them.
#[derive(Clone, Copy, Debug)]
pub struct BasisEntry {
    pub kind: PairKind,
    pub n: usize,
    pub m: usize,
}

/// Canonical ordered basis: all aa pairs lexicographic, then all ab pairs,
/// then all bb pairs. Full dimension is 2N² + N; hard-core modes delete the
/// doubly-occupied same-species entries.
#[derive(Clone, Debug)]
pub struct TwoExcitationBasis {
    n_sites: usize,
    hardcore_a: bool,
    hardcore_b: bool,
    entries: Vec<BasisEntry>,
    index: HashMap<(PairKind, usize, usize), usize>,
}

impl TwoExcitationBasis {
    /// Full finite-interaction basis on `n` sites.
    pub fn new(n: usize) -> Result<Self> {
        Self::new_hardcore(n, false, false)
    }

    /// Basis with doubly-occupied aa and/or bb sites removed.
    pub fn new_hardcore(n: usize, hardcore_a: bool, hardcore_b: bool) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadSize(n));
        }
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                if hardcore_a && i == j {
                    continue;
                }
                entries.push(BasisEntry { kind: PairKind::AA, n: i, m: j });
            }
        }
        for i in 0..n {
            for j in 0..n {
                entries.push(BasisEntry { kind: PairKind::AB, n: i, m: j });
            }
        }
        for i in 0..n {
            for j in i..n {
                if hardcore_b && i == j {
                    continue;
                }
                entries.push(BasisEntry { kind: PairKind::BB, n: i, m: j });
            }
        }
        let index = entries
            .iter()
            .enumerate()
            .map(|(pos, e)| ((e.kind, e.n, e.m), pos))
            .collect();
        Ok(TwoExcitationBasis {
            n_sites: n,
            hardcore_a,
            hardcore_b,
            entries,
            index,
        })
    }

    /// Basis matching the interaction mode of `params`.
    pub fn for_params(params: &ModelParams) -> Result<Self> {
        Self::new_hardcore(params.n, params.u1_infinite, params.u2_infinite)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dimension(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[BasisEntry] {
        &self.entries
    }

    pub fn hardcore_a(&self) -> bool {
        self.hardcore_a
    }

    pub fn hardcore_b(&self) -> bool {
        self.hardcore_b
    }

    /// Position of the pair `(kind, n, m)`; site order is canonicalized for
    /// identical species. Returns `None` for entries deleted by hard-core
    /// modes.
    pub fn index_of(&self, kind: PairKind, n: usize, m: usize) -> Option<usize> {
        let key = match kind {
            PairKind::AB => (kind, n, m),
            _ => (kind, n.min(m), n.max(m)),
        };
        self.index.get(&key).copied()
    }

    /// Image of entry `pos` under translation by one site.
    pub fn translated_index(&self, pos: usize) -> usize {
        let e = self.entries[pos];
        let n = (e.n + 1) % self.n_sites;
        let m = (e.m + 1) % self.n_sites;
        self.index_of(e.kind, n, m)
            .expect("translation preserves the basis")
    }

    /// Packs amplitude matrices into the coefficient vector over this basis.
    ///
    /// The packing absorbs bosonic normalization so that the plain 2-norm of
    /// the vector equals the weighted norm of the state: an off-diagonal aa
    /// entry carries 2A_{nm}, a diagonal one √2·A_{nn}, and ab entries carry
    /// B_{nm} unchanged (bb mirrors aa).
    pub fn pack(&self, state: &TwoExcitationState) -> Array1<Complex64> {
        let sqrt2 = 2.0_f64.sqrt();
        let mut v = Array1::zeros(self.dimension());
        for (pos, e) in self.entries.iter().enumerate() {
            v[pos] = match e.kind {
                PairKind::AA if e.n == e.m => sqrt2 * state.a[[e.n, e.m]],
                PairKind::AA => 2.0 * state.a[[e.n, e.m]],
                PairKind::AB => state.b[[e.n, e.m]],
                PairKind::BB if e.n == e.m => sqrt2 * state.c[[e.n, e.m]],
                PairKind::BB => 2.0 * state.c[[e.n, e.m]],
            };
        }
        v
    }

    /// Inverse of [`Self::pack`].
    pub fn unpack(&self, v: &Array1<Complex64>) -> TwoExcitationState {
        let sqrt2 = 2.0_f64.sqrt();
        let mut st = TwoExcitationState::zero(self.n_sites);
        for (pos, e) in self.entries.iter().enumerate() {
            match e.kind {
                PairKind::AA if e.n == e.m => st.a[[e.n, e.n]] = v[pos] / sqrt2,
                PairKind::AA => st.set_aa(e.n, e.m, v[pos] / 2.0),
                PairKind::AB => st.b[[e.n, e.m]] = v[pos],
                PairKind::BB if e.n == e.m => st.c[[e.n, e.n]] = v[pos] / sqrt2,
                PairKind::BB => st.set_bb(e.n, e.m, v[pos] / 2.0),
            }
        }
        st
    }
}
