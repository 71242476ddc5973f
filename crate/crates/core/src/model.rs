//! Dispersions and the single-excitation two-level solver.

use crate::params::ModelParams;

/// Tight-binding dispersions of the two species:
/// ω_k = Δ − 2J₁ cos k for species a, ω'_k = −2J₂ cos k for species b.
pub fn dispersion_pair(params: &ModelParams, k: f64) -> (f64, f64) {
    (
        params.delta - 2.0 * params.j1 * k.cos(),
        -2.0 * params.j2 * k.cos(),
    )
}

/// Solution of the single-excitation 2×2 problem at one momentum.
///
/// At momentum k the Rabi coupling mixes the two species through the matrix
/// [[ω_k, Ω], [Ω, ω'_k]]; `eps_minus`/`eps_plus` are its eigenvalues ordered
/// by value, and each `mixing_*` is the corresponding normalized
/// (a-amplitude, b-amplitude) eigenvector.
#[derive(Clone, Copy, Debug)]
pub struct SingleExcitationPair {
    pub k: f64,
    pub omega: f64,
    pub omega_prime: f64,
    pub eps_minus: f64,
    pub eps_plus: f64,
    pub mixing_minus: [f64; 2],
    pub mixing_plus: [f64; 2],
}

/// Diagonalizes the single-excitation 2×2 block at momentum `k`:
/// ε_k^± = (ω_k + ω'_k ± √((ω_k − ω'_k)² + 4Ω²)) / 2.
pub fn single_excitation_solve(params: &ModelParams, k: f64) -> SingleExcitationPair {
    let (w, wp) = dispersion_pair(params, k);
    let half_sum = 0.5 * (w + wp);
    let half_gap = 0.5 * ((w - wp).powi(2) + 4.0 * params.omega.powi(2)).sqrt();
    let (eps_minus, eps_plus) = (half_sum - half_gap, half_sum + half_gap);

    SingleExcitationPair {
        k,
        omega: w,
        omega_prime: wp,
        eps_minus,
        eps_plus,
        mixing_minus: eigvec2(w, wp, params.omega, eps_minus),
        mixing_plus: eigvec2(w, wp, params.omega, eps_plus),
    }
}

/// Normalized eigenvector of [[w, om], [om, wp]] for eigenvalue `eps`,
/// choosing whichever closed form is numerically stable.
fn eigvec2(w: f64, wp: f64, om: f64, eps: f64) -> [f64; 2] {
    // (eps - w)*x = om*y and om*x = (eps - wp)*y; pick the larger pivot.
    let (x, y) = if (eps - w).abs() >= (eps - wp).abs() {
        (om, eps - w)
    } else {
        (eps - wp, om)
    };
    let norm = x.hypot(y);
    if norm < 1e-300 {
        // Fully degenerate (om = 0 and w = wp): any direction works.
        return [1.0, 0.0];
    }
    [x / norm, y / norm]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decoupled_eigvec_is_axis_aligned() {
        let p = ModelParams {
            j1: 1.0,
            j2: 0.5,
            u1: 0.0,
            u2: 0.0,
            u3: 0.0,
            omega: 0.0,
            delta: 2.0,
            n: 4,
            u1_infinite: false,
            u2_infinite: false,
        };
        let pair = single_excitation_solve(&p, 0.3);
        // With Ω = 0 each branch is a pure species.
        for v in [pair.mixing_minus, pair.mixing_plus] {
            assert!(v[0].abs() > 0.999 || v[1].abs() > 0.999);
        }
    }
}
