//! Building normalized two-excitation states from weighted components.

use crate::bethe::SingleSpeciesRoot;
use crate::planewave::{plane_wave_matrix, PlaneWaveComponent};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::state::TwoExcitationState;
use crate::weights::{channel_mixing, EigenComponent};
use ndarray::Array2;
use num_complex::Complex64;

/// Relative size below which a residual diagonal amplitude is accepted as
/// zero before projecting an impenetrable species' diagonal away.
const DIAGONAL_TOL: f64 = 1e-6;

fn zero_diagonal(m: &mut Array2<Complex64>) {
    for i in 0..m.nrows() {
        m[[i, i]] = Complex64::new(0.0, 0.0);
    }
}

fn max_diagonal(m: &Array2<Complex64>) -> f64 {
    (0..m.nrows())
        .map(|i| m[[i, i]].norm())
        .fold(0.0, f64::max)
}

/// Enforces vanishing diagonals for impenetrable species, verifying first
/// that the assembled amplitudes already satisfy the constraint numerically.
fn project_hardcore(
    params: &ModelParams,
    a: &mut Array2<Complex64>,
    c: &mut Array2<Complex64>,
    scale: f64,
) -> Result<()> {
    if params.u1_infinite {
        let dev = max_diagonal(a);
        if dev > DIAGONAL_TOL * scale {
            return Err(Error::InconsistentWeights(format!(
                "impenetrable-species aa diagonal of relative size {:.3e}",
                dev / scale
            )));
        }
        zero_diagonal(a);
    }
    if params.u2_infinite {
        let dev = max_diagonal(c);
        if dev > DIAGONAL_TOL * scale {
            return Err(Error::InconsistentWeights(format!(
                "impenetrable-species bb diagonal of relative size {:.3e}",
                dev / scale
            )));
        }
        zero_diagonal(c);
    }
    Ok(())
}

fn finish(
    mut a: Array2<Complex64>,
    b: Array2<Complex64>,
    mut c: Array2<Complex64>,
    params: &ModelParams,
    r: usize,
    energy: f64,
) -> Result<TwoExcitationState> {
    let scale = a
        .iter()
        .chain(b.iter())
        .chain(c.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if scale < 1e-300 {
        return Err(Error::ZeroState);
    }
    project_hardcore(params, &mut a, &mut c, scale)?;
    let mut state = TwoExcitationState::from_matrices(a, b, c).normalized()?;
    state.energy = Some(energy);
    state.total_momentum_index = Some(r);
    Ok(state)
}

/// Assembles an equal-hopping eigenstate from the three channel weights:
/// each channel's matrix enters the `(A, C, B)` amplitudes scaled by the
/// dressed-basis mixing coefficients of [`channel_mixing`].
pub fn assemble_symmetric(
    params: &ModelParams,
    r: usize,
    energy: f64,
    comps: &[PlaneWaveComponent; 3],
    weights: &[Complex64; 3],
) -> Result<TwoExcitationState> {
    let n = params.n;
    let mix = channel_mixing(params);
    let mats: Vec<Array2<Complex64>> = comps.iter().map(|c| plane_wave_matrix(n, c)).collect();
    let mut a = Array2::<Complex64>::zeros((n, n));
    let mut b = Array2::<Complex64>::zeros((n, n));
    let mut c = Array2::<Complex64>::zeros((n, n));
    for (i, mat) in mats.iter().enumerate() {
        let wi = weights[i];
        a.scaled_add(wi * mix[0][i], mat);
        c.scaled_add(wi * mix[1][i], mat);
        if mix[2][i] != 0.0 {
            b.scaled_add(wi * mix[2][i], mat);
        }
    }
    finish(a, b, c, params, r, energy)
}

/// Assembles a generic eigenstate from the `ξ` null vector of the four-row
/// weight system: `λ_i = (ε−ε^b_i)ξ_i`, `λ'_i = (ε−ε^a_i)ξ_i`,
/// `λ''_i = λ_i (ε−ε^a_i)/Ω`, with the antisymmetric admixture `κ_i` on the
/// interspecies amplitudes.
pub fn assemble_generic(
    params: &ModelParams,
    r: usize,
    energy: f64,
    comps: &[EigenComponent],
    xi: &[Complex64],
) -> Result<TwoExcitationState> {
    if params.omega == 0.0 {
        return Err(Error::WrongMode(
            "component assembly requires a nonzero interspecies drive".into(),
        ));
    }
    if comps.len() != xi.len() {
        return Err(Error::BadSize(xi.len()));
    }
    let n = params.n;
    let e = Complex64::new(energy, 0.0);
    let mut a = Array2::<Complex64>::zeros((n, n));
    let mut b = Array2::<Complex64>::zeros((n, n));
    let mut c = Array2::<Complex64>::zeros((n, n));
    for (comp, &xi_i) in comps.iter().zip(xi) {
        let lambda = (e - comp.eps_b) * xi_i;
        let lambda_c = (e - comp.eps_a) * xi_i;
        let lambda_b = lambda * (e - comp.eps_a) / params.omega;
        let sym = plane_wave_matrix(n, &comp.sym);
        a.scaled_add(lambda, &sym);
        c.scaled_add(lambda_c, &sym);
        b.scaled_add(lambda_b, &sym);
        if comp.kappa.norm() > 0.0 {
            let anti = PlaneWaveComponent {
                symmetric: false,
                ..comp.sym.clone()
            };
            let anti_mat = plane_wave_matrix(n, &anti);
            b.scaled_add(lambda_b * comp.kappa, &anti_mat);
        }
    }
    finish(a, b, c, params, r, energy)
}

/// Assembles a single-species pair eigenstate `A = −C`, `B = 0` (decoupled
/// from the interspecies drive). Requires matching hoppings and on-site
/// interactions between the species so both pair blocks quantize alike.
pub fn assemble_type1(
    params: &ModelParams,
    r: usize,
    root: &SingleSpeciesRoot,
) -> Result<TwoExcitationState> {
    let n = params.n;
    let p_total = params.momentum(r);
    let a: Array2<Complex64> = if root.onsite {
        Array2::from_shape_fn((n, n), |(i, j)| {
            if i == j {
                Complex64::from_polar(1.0, p_total * i as f64)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    } else {
        let comp = PlaneWaveComponent::from_bethe(n, p_total, root.k, true);
        plane_wave_matrix(n, &comp)
    };
    let c = a.mapv(|z| -z);
    let b = Array2::<Complex64>::zeros((n, n));
    finish(a, b, c, params, r, root.energy)
}

/// Assembles an antisymmetric interspecies pair
/// `B_{nm} = e^{ikn+iqm} − e^{iqn+ikm}`, `A = C = 0`, from grid momenta
/// `k = 2πl/N`, `q = P − k`. Valid when both orderings carry the same
/// kinetic energy (equal hoppings, or `cos k = cos q`).
pub fn assemble_type3(params: &ModelParams, r: usize, l: usize) -> Result<TwoExcitationState> {
    let n = params.n;
    let k = 2.0 * std::f64::consts::PI * l as f64 / n as f64;
    let q = params.momentum(r) - k;
    if (params.j1 - params.j2).abs() > 1e-14 && (k.cos() - q.cos()).abs() > 1e-12 {
        return Err(Error::WrongMode(
            "antisymmetric pair requires equal hoppings or cos k = cos q".into(),
        ));
    }
    let energy = params.delta - 2.0 * params.j1 * k.cos() - 2.0 * params.j2 * q.cos();
    let b = Array2::from_shape_fn((n, n), |(i, j)| {
        Complex64::from_polar(1.0, k * i as f64 + q * j as f64)
            - Complex64::from_polar(1.0, q * i as f64 + k * j as f64)
    });
    let a = Array2::<Complex64>::zeros((n, n));
    let c = Array2::<Complex64>::zeros((n, n));
    finish(a, b, c, params, r, energy)
}
