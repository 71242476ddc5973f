//! Component momenta at fixed total momentum and energy.
//!
//! With `u = cos(k − P/2)` the two-particle dressed-branch condition
//!
//! ```text
//! (ε−ε^a)(ε−ε^b)(ε−ε^{ab})(ε−ε^{ba}) = Ω²(2ε−ε^a−ε^b)²
//! ```
//!
//! becomes a quartic `Q(u) = 0` whose coefficients depend on `(ε, P)` only.
//! Each root `u` fixes one component momentum pair `k = P/2 + acos u`,
//! `q = P − k` (canonical branch `Im k ≤ 0`).  The degree drops when a
//! hopping amplitude vanishes or `P = π`; such lost roots are reported as
//! `escaped`.  When the two hoppings are equal the quartic factorizes exactly
//! into a double "mixed-branch" root and a quadratic for the `ε ∓ 2Ω`
//! branches, and that factorization is used verbatim.

use crate::error::{Error, Result};
use crate::params::ModelParams;
use num_complex::Complex64;

/// One root of the branch-energy quartic.
#[derive(Debug, Clone)]
pub struct EnergyRoot {
    /// Root of the quartic, `u = cos(k − P/2)`; NaN for escaped roots.
    pub u: Complex64,
    /// Component quasi-momentum on the canonical branch (`Im k ≤ 0`).
    pub k: Complex64,
    /// Partner momentum `q = P − k`.
    pub q: Complex64,
    /// Algebraic multiplicity (2 for the mixed-branch root at equal hopping).
    pub multiplicity: usize,
    /// True when this slot left to infinity because the polynomial degree
    /// dropped (vanishing hopping or `P = π`).
    pub escaped: bool,
    /// `min |ε − ε^σ_k − ε^τ_q|` over the four dressed-branch combinations.
    pub branch_residual: f64,
}

/// Numerically stable roots of `a u² + b u + c` with real coefficients.
fn quadratic_roots(a: f64, b: f64, c: f64) -> (Complex64, Complex64) {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let qq = -0.5 * (b + b.signum() * sq);
        if qq.abs() > 1e-300 {
            (Complex64::new(qq / a, 0.0), Complex64::new(c / qq, 0.0))
        } else {
            (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
        }
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a);
        (Complex64::new(re, im), Complex64::new(re, -im))
    }
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Durand–Kerner simultaneous root iteration for a low-degree polynomial
/// with real coefficients (`coeffs[i]` multiplies `u^i`, leading ≠ 0).
fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let monic: Vec<Complex64> = coeffs
        .iter()
        .map(|&c| Complex64::new(c / lead, 0.0))
        .collect();
    if deg == 1 {
        return vec![-monic[0]];
    }
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for i in (0..deg).rev() {
            acc = acc * z + monic[i];
        }
        acc
    };
    let radius = 1.0
        + monic
            .iter()
            .take(deg)
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|i| seed.powu(i as u32 + 1) * radius)
        .collect();
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for l in 0..deg {
                if l != i {
                    denom *= roots[i] - roots[l];
                }
            }
            if denom.norm() < 1e-280 {
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * radius {
            break;
        }
    }
    roots
}

/// Complex single-particle dressed energies `(ε⁻, ε⁺)` at momentum `z`.
fn dressed_pair(params: &ModelParams, z: Complex64) -> (Complex64, Complex64) {
    let w = Complex64::new(params.delta, 0.0) - 2.0 * params.j1 * z.cos();
    let wp = -2.0 * params.j2 * z.cos();
    let root = ((w - wp) * (w - wp) + 4.0 * params.omega * params.omega).sqrt();
    (0.5 * (w + wp - root), 0.5 * (w + wp + root))
}

fn branch_residual(params: &ModelParams, eps: f64, k: Complex64, q: Complex64) -> f64 {
    let (km, kp) = dressed_pair(params, k);
    let (qm, qp) = dressed_pair(params, q);
    let eps = Complex64::new(eps, 0.0);
    [km + qm, km + qp, kp + qm, kp + qp]
        .iter()
        .map(|sum| (eps - sum).norm())
        .fold(f64::INFINITY, f64::min)
}

fn root_from_u(params: &ModelParams, p_total: f64, eps: f64, u: Complex64, multiplicity: usize) -> EnergyRoot {
    let mut y = u.acos();
    if y.im > 0.0 {
        y = -y;
    }
    let k = Complex64::new(p_total / 2.0, 0.0) + y;
    let q = Complex64::new(p_total, 0.0) - k;
    EnergyRoot {
        u,
        k,
        q,
        multiplicity,
        escaped: false,
        branch_residual: branch_residual(params, eps, k, q),
    }
}

fn escaped_root() -> EnergyRoot {
    let nan = Complex64::new(f64::NAN, f64::NAN);
    EnergyRoot {
        u: nan,
        k: nan,
        q: nan,
        multiplicity: 1,
        escaped: true,
        branch_residual: f64::NAN,
    }
}

/// All component momenta compatible with total momentum `p_total` and
/// two-particle energy `eps`.  Roots are merged by proximity, so a list
/// entry with `multiplicity: 2` is the coalesced mixed-branch pair.
pub fn energy_roots(params: &ModelParams, p_total: f64, eps: f64) -> Result<Vec<EnergyRoot>> {
    params.validate()?;
    let c = (p_total / 2.0).cos();
    let st = (p_total / 2.0).sin();
    let alpha1 = 2.0 * params.j1 * c;
    let alpha2 = 2.0 * params.j2 * c;
    let delta_sum = alpha1 + alpha2;
    let beta = 2.0 * (params.j1 - params.j2) * st;
    let e1 = eps - 2.0 * params.delta;
    let em = eps - params.delta;
    let hop_scale = params.j1.abs().max(params.j2.abs()).max(1e-30);

    let mut raw: Vec<(Complex64, usize)> = Vec::new();
    let mut escaped = 0usize;

    if beta.abs() < 1e-13 * hop_scale {
        // Exact factorization Q = (ε−Δ+δu)² · (p1·p2 − 4Ω²).
        if delta_sum.abs() > 1e-13 * hop_scale {
            raw.push((Complex64::new(-em / delta_sum, 0.0), 2));
        } else if em.abs() < 1e-12 * (eps.abs() + hop_scale) {
            return Err(Error::NoRoots);
        } else {
            escaped += 2;
        }
        // p1·p2 − 4Ω² = 4α₁α₂u² + 2(α₂e₁ + α₁ε)u + (εe₁ − 4Ω²).
        let a = 4.0 * alpha1 * alpha2;
        let b = 2.0 * (alpha2 * e1 + alpha1 * eps);
        let c0 = eps * e1 - 4.0 * params.omega * params.omega;
        let scale = a.abs().max(b.abs()).max(c0.abs());
        if scale == 0.0 {
            return Err(Error::NoRoots);
        }
        if a.abs() > 1e-13 * scale {
            let (r1, r2) = quadratic_roots(a, b, c0);
            raw.push((r1, 1));
            raw.push((r2, 1));
        } else if b.abs() > 1e-13 * scale {
            raw.push((Complex64::new(-c0 / b, 0.0), 1));
            escaped += 1;
        } else {
            escaped += 2;
        }
    } else {
        let p1 = [e1, 2.0 * alpha1];
        let p2 = [eps, 2.0 * alpha2];
        let p3 = [
            em * em - beta * beta,
            2.0 * em * delta_sum,
            delta_sum * delta_sum + beta * beta,
        ];
        let o2 = params.omega * params.omega;
        let p4 = [
            4.0 * o2 * em * em,
            8.0 * o2 * em * delta_sum,
            4.0 * o2 * delta_sum * delta_sum,
        ];
        let mut q = poly_mul(&poly_mul(&p1, &p2), &p3);
        for (i, v) in p4.iter().enumerate() {
            q[i] -= v;
        }
        let scale = q.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(Error::NoRoots);
        }
        while q.len() > 1 && q.last().unwrap().abs() < 1e-11 * scale {
            q.pop();
            escaped += 1;
        }
        if q.len() == 1 {
            return Err(Error::NoRoots);
        }
        for root in polynomial_roots(&q) {
            raw.push((root, 1));
        }
    }

    // Merge coincident roots.
    let mut merged: Vec<(Complex64, usize)> = Vec::new();
    for (u, mult) in raw {
        if let Some(entry) = merged
            .iter_mut()
            .find(|(v, _)| (*v - u).norm() < 1e-6 * (1.0 + u.norm()))
        {
            entry.1 += mult;
        } else {
            merged.push((u, mult));
        }
    }

    let mut out: Vec<EnergyRoot> = merged
        .into_iter()
        .map(|(u, mult)| root_from_u(params, p_total, eps, u, mult))
        .collect();
    for _ in 0..escaped {
        out.push(escaped_root());
    }
    if out.iter().all(|r| r.escaped) {
        return Err(Error::NoRoots);
    }
    Ok(out)
}
