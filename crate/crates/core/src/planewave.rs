//! Two-plane-wave component matrices.
//!
//! Every analytic two-particle eigenstate in this crate is a superposition of
//! components built from a momentum pair `(k, q)` with `k + q = P` (the total
//! momentum) and a scattering factor `s`.  A *symmetric* component is
//!
//! ```text
//! W[n, m] = e^{i k n + i q m} + s · e^{i q n + i k m}      (n ≤ m, mirrored)
//! ```
//!
//! and an *antisymmetric* component flips the sign of the second term, has a
//! zero diagonal and is anti-mirrored.  For complex momenta the naive formula
//! mixes exponentially large and small factors, so [`plane_wave_matrix`]
//! evaluates the equivalent ring form
//!
//! ```text
//! W[n, m] = e^{iP(n+m)/2} ( e^{-i y d} ± s_ring · e^{i y (d - N)} ),
//! y = k - P/2,  d = m - n,  s_ring = s · e^{i y N},
//! ```
//!
//! in which both exponentials decay for canonical components (`Im y ≤ 0`).

use crate::error::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64;

/// Tangent that saturates instead of overflowing far from the real axis.
pub(crate) fn safe_tan(z: Complex64) -> Complex64 {
    if z.im > 50.0 {
        Complex64::new(0.0, 1.0)
    } else if z.im < -50.0 {
        Complex64::new(0.0, -1.0)
    } else {
        z.tan()
    }
}

/// Scattering factor `s = (2J(sin k − sin q) − iŨ) / (2J(sin k − sin q) + iŨ)`
/// for a finite fictitious interaction `Ũ` (energy units) on a chain with
/// hopping `J`.
pub fn scattering_factor(
    k: Complex64,
    q: Complex64,
    u_tilde: f64,
    j: f64,
) -> Result<Complex64> {
    if u_tilde == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let x = 2.0 * j * (k.sin() - q.sin());
    let denom = x + Complex64::new(0.0, u_tilde);
    if denom.norm() < 1e-300 {
        return Err(Error::SingularDenominator(denom.norm()));
    }
    Ok((x - Complex64::new(0.0, u_tilde)) / denom)
}

/// One two-plane-wave component of an eigenstate.
#[derive(Debug, Clone)]
pub struct PlaneWaveComponent {
    /// Number of lattice sites.
    pub n_sites: usize,
    /// Total momentum `P` of the pair (real).
    pub p_total: f64,
    /// Quasi-momentum of the first plane wave (canonical branch, `Im k ≤ 0`).
    pub k: Complex64,
    /// Partner momentum `q = P − k`.
    pub q: Complex64,
    /// Scattering factor attached to the exchange term.
    pub s: Complex64,
    /// Dimensionless fictitious interaction `ũ` obeying the periodic
    /// quantization `e^{−ikN} = s(ũ)` by construction.
    pub u_tilde: Complex64,
    /// Symmetric versus antisymmetric form.
    pub symmetric: bool,
}

impl PlaneWaveComponent {
    /// Scattering factor in the impenetrable (hard-core) limit.
    pub const HARDCORE_S: Complex64 = Complex64::new(-1.0, 0.0);

    /// Builds a component whose scattering factor satisfies the periodic
    /// quantization identically: `s := e^{−ikN}` and
    /// `ũ := 2(sin k − sin q)·tan(kN/2)`.
    ///
    /// The momentum is canonicalized so that `Im(k − P/2) ≤ 0`; the swap
    /// `k ↔ q` leaves the component invariant.
    pub fn from_bethe(n_sites: usize, p_total: f64, k: Complex64, symmetric: bool) -> Self {
        let half_p = Complex64::new(p_total / 2.0, 0.0);
        let mut k = k;
        if (k - half_p).im > 0.0 {
            k = 2.0 * half_p - k;
        }
        let q = 2.0 * half_p - k;
        let nn = n_sites as f64;
        let s = (-Complex64::i() * k * nn).exp();
        let u_tilde = 2.0 * (k.sin() - q.sin()) * safe_tan(k * nn / 2.0);
        Self {
            n_sites,
            p_total,
            k,
            q,
            s,
            u_tilde,
            symmetric,
        }
    }

    /// Relative half-momentum `y = k − P/2` (canonically `Im y ≤ 0`).
    pub fn y(&self) -> Complex64 {
        self.k - Complex64::new(self.p_total / 2.0, 0.0)
    }

    /// Ring-closure factor `s·e^{iyN}`; equals `(−1)^r` for components that
    /// satisfy the periodic quantization at total momentum `2πr/N`.
    pub fn s_ring(&self) -> Complex64 {
        self.s * (Complex64::i() * self.y() * self.n_sites as f64).exp()
    }

    /// `d = 1 + s`, the weight carried by the relative-coordinate diagonal.
    pub fn d(&self) -> Complex64 {
        Complex64::new(1.0, 0.0) + self.s
    }

    /// `w = ũ·(1 + s) = 2(sin k − sin q)·i(s − 1)`, evaluated in the
    /// pole-free product form.
    pub fn w(&self) -> Complex64 {
        2.0 * (self.k.sin() - self.q.sin()) * Complex64::i() * (self.s - Complex64::new(1.0, 0.0))
    }

    /// Inverse localization length `K = −Im k` (zero for scattering states).
    pub fn decay_constant(&self) -> f64 {
        -self.k.im
    }
}

/// Dense `N×N` matrix of the component on the periodic chain.
pub fn plane_wave_matrix(n_sites: usize, comp: &PlaneWaveComponent) -> Array2<Complex64> {
    let nn = n_sites as f64;
    let y = comp.y();
    let s_ring = comp.s_ring();
    let half_p = comp.p_total / 2.0;
    let exchange_sign = if comp.symmetric { 1.0 } else { -1.0 };
    let mut out = Array2::zeros((n_sites, n_sites));
    for n in 0..n_sites {
        for m in n..n_sites {
            let d = (m - n) as f64;
            let envelope = (-Complex64::i() * y * d).exp()
                + exchange_sign * s_ring * (Complex64::i() * y * (d - nn)).exp();
            let phase = Complex64::from_polar(1.0, half_p * (n + m) as f64);
            let value = phase * envelope;
            if n == m {
                if comp.symmetric {
                    out[[n, m]] = value;
                }
            } else {
                out[[n, m]] = value;
                out[[m, n]] = if comp.symmetric { value } else { -value };
            }
        }
    }
    out
}
