//! Two-excitation amplitudes (A, B, C) and the weighted norm.

use crate::error::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64;

/// Amplitudes of a general two-excitation state
/// |ψ⟩ = Σ_{nm} (A_{nm} a†_n a†_m + B_{nm} a†_n b†_m + C_{nm} b†_n b†_m) |0⟩.
///
/// A and C are symmetric by construction (the operator products commute), B
/// is unrestricted. The physical norm of |ψ⟩ in this parametrization is the
/// weighted sum Σ 2|A|² + |B|² + 2|C|².
#[derive(Clone, Debug)]
pub struct TwoExcitationState {
    /// aa amplitudes, N×N symmetric.
    pub a: Array2<Complex64>,
    /// ab amplitudes, N×N unrestricted.
    pub b: Array2<Complex64>,
    /// bb amplitudes, N×N symmetric.
    pub c: Array2<Complex64>,
    /// Energy label when the state is an eigenstate.
    pub energy: Option<f64>,
    /// Total-momentum index r (P = 2πr/N) when the state is a momentum state.
    pub total_momentum_index: Option<usize>,
}

impl TwoExcitationState {
    /// All-zero state on `n` sites.
    pub fn zero(n: usize) -> Self {
        TwoExcitationState {
            a: Array2::zeros((n, n)),
            b: Array2::zeros((n, n)),
            c: Array2::zeros((n, n)),
            energy: None,
            total_momentum_index: None,
        }
    }

    /// Builds a state from raw matrices, symmetrizing A and C.
    pub fn from_matrices(
        a: Array2<Complex64>,
        b: Array2<Complex64>,
        c: Array2<Complex64>,
    ) -> Self {
        let sym = |m: &Array2<Complex64>| (m + &m.t()) * Complex64::new(0.5, 0.0);
        TwoExcitationState {
            a: sym(&a),
            c: sym(&c),
            b,
            energy: None,
            total_momentum_index: None,
        }
    }

    /// Number of lattice sites.
    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    /// Writes an aa amplitude, mirroring it to keep A symmetric.
    pub fn set_aa(&mut self, n: usize, m: usize, value: Complex64) {
        self.a[[n, m]] = value;
        self.a[[m, n]] = value;
    }

    /// Writes a bb amplitude, mirroring it to keep C symmetric.
    pub fn set_bb(&mut self, n: usize, m: usize, value: Complex64) {
        self.c[[n, m]] = value;
        self.c[[m, n]] = value;
    }

    /// Symmetric part B_s = (B + Bᵀ)/2.
    pub fn b_symmetric(&self) -> Array2<Complex64> {
        (&self.b + &self.b.t()) * Complex64::new(0.5, 0.0)
    }

    /// Antisymmetric part B_a = (B − Bᵀ)/2.
    pub fn b_antisymmetric(&self) -> Array2<Complex64> {
        (&self.b - &self.b.t()) * Complex64::new(0.5, 0.0)
    }

    /// Weighted squared norm Σ 2|A|² + |B|² + 2|C|².
    pub fn weighted_norm_sq(&self) -> f64 {
        let sq = |m: &Array2<Complex64>| m.iter().map(|z| z.norm_sqr()).sum::<f64>();
        2.0 * sq(&self.a) + sq(&self.b) + 2.0 * sq(&self.c)
    }

    /// Weighted inner product ⟨self|other⟩ = Σ 2Ā·A' + B̄·B' + 2C̄·C'.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let dot = |x: &Array2<Complex64>, y: &Array2<Complex64>| {
            x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>()
        };
        2.0 * dot(&self.a, &other.a) + dot(&self.b, &other.b) + 2.0 * dot(&self.c, &other.c)
    }

    /// Returns a copy scaled to weighted norm 1, or `ZeroState` if every
    /// amplitude is below 1e-300.
    pub fn normalized(&self) -> Result<Self> {
        let norm_sq = self.weighted_norm_sq();
        if norm_sq < 1e-300 {
            return Err(Error::ZeroState);
        }
        let mut out = self.clone();
        out.scale(Complex64::new(1.0 / norm_sq.sqrt(), 0.0));
        Ok(out)
    }

    /// Multiplies every amplitude by `factor` in place.
    pub fn scale(&mut self, factor: Complex64) {
        self.a.mapv_inplace(|z| z * factor);
        self.b.mapv_inplace(|z| z * factor);
        self.c.mapv_inplace(|z| z * factor);
    }

    /// Adds `factor * other` into `self` (amplitude-wise).
    pub fn axpy(&mut self, factor: Complex64, other: &Self) {
        self.a.zip_mut_with(&other.a, |x, y| *x += factor * y);
        self.b.zip_mut_with(&other.b, |x, y| *x += factor * y);
        self.c.zip_mut_with(&other.c, |x, y| *x += factor * y);
    }

    /// Largest amplitude difference against `other` (∞-norm over A, B, C).
    pub fn distance_max(&self, other: &Self) -> f64 {
        let block = |x: &Array2<Complex64>, y: &Array2<Complex64>| {
            x.iter()
                .zip(y.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max)
        };
        block(&self.a, &other.a)
            .max(block(&self.b, &other.b))
            .max(block(&self.c, &other.c))
    }

    /// Largest single amplitude magnitude.
    pub fn amplitude_max(&self) -> f64 {
        self.a
            .iter()
            .chain(self.b.iter())
            .chain(self.c.iter())
            .map(|z| z.norm())
            .fold(0.0f64, f64::max)
    }

    /// Translates every excitation by one site: site j → j+1 (periodic).
    pub fn translated(&self) -> Self {
        let n = self.n();
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let (si, sj) = ((i + n - 1) % n, (j + n - 1) % n);
                out.a[[i, j]] = self.a[[si, sj]];
                out.b[[i, j]] = self.b[[si, sj]];
                out.c[[i, j]] = self.c[[si, sj]];
            }
        }
        out.energy = self.energy;
        out.total_momentum_index = self.total_momentum_index;
        out
    }

    /// Fixes the global phase so the largest amplitude is real positive
    /// (useful when comparing states from different solvers).
    pub fn phase_fixed(&self) -> Self {
        let mut best = Complex64::new(0.0, 0.0);
        for z in self.a.iter().chain(self.b.iter()).chain(self.c.iter()) {
            if z.norm() > best.norm() {
                best = *z;
            }
        }
        let mut out = self.clone();
        if best.norm() > 1e-300 {
            out.scale(best.conj() / best.norm());
        }
        out
    }
}
