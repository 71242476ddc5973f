//! Periodic two-particle quantization for a single bosonic species.
//!
//! For two identical bosons with hopping `J`, on-site interaction `U` and
//! total momentum `P = 2πr/N`, an eigenstate is a symmetric two-plane-wave
//! component whose quasi-momentum satisfies `e^{−ikN} = s(k, P−k)`.  This
//! module finds the complete root multiset for a sector: scattering roots on
//! (or deformed from) the momentum grid plus, when present, one bound root
//! with complex `k`.  The count of surviving states is validated against the
//! translation-orbit dimension of the sector, so a missed root fails loudly.

use crate::planewave::scattering_factor;
use crate::error::{Error, Result};
use crate::params::ModelParams;
use num_complex::Complex64;
use std::f64::consts::PI;

/// One solution of the periodic two-particle quantization.
#[derive(Debug, Clone)]
pub struct SingleSpeciesRoot {
    /// Quasi-momentum (canonical branch: `Im k ≤ 0`).
    pub k: Complex64,
    /// Partner momentum `q = P − k`.
    pub q: Complex64,
    /// Scattering factor at the root.
    pub s: Complex64,
    /// Pair energy `2Δ − 2J(cos k + cos q)`.
    pub energy: f64,
    /// `|e^{−ikN} − s|`, the defect of the quantization condition.
    pub bethe_residual: f64,
    /// True when `Im k ≠ 0` (bound pair).
    pub bound: bool,
    /// True when the associated wavefunction vanishes identically
    /// (self-paired momentum `k = q` with `s = −1`); not a physical state.
    pub vanishing: bool,
    /// True for the perfectly localized on-site pair that appears when the
    /// relative hopping scale `4J·cos(P/2)` vanishes; its wavefunction is
    /// `A[n, n] ∝ e^{iPn}` and the momentum fields hold the `K → ∞` limit.
    pub onsite: bool,
}

/// Expected number of physical states in sector `r`: the number of
/// translation orbits of site pairs whose length `L` satisfies `rL ≡ 0 (N)`.
fn sector_state_count(n: usize, r: usize, hardcore: bool) -> usize {
    let mut count = 0;
    for d in 0..=n / 2 {
        if d == 0 && hardcore {
            continue;
        }
        let orbit_len = if d * 2 == n { n / 2 } else { n };
        if (r * orbit_len) % n == 0 {
            count += 1;
        }
    }
    count
}

fn wrap_2pi(k: f64) -> f64 {
    let mut k = k % (2.0 * PI);
    if k < 0.0 {
        k += 2.0 * PI;
    }
    k
}

/// Solves the sector-`r` quantization for species `a` of `params`
/// (couplings `j1`, `u1`/`u1_infinite`, on-site offset `delta`; the
/// inter-species terms play no role for a single species).
pub fn solve_single_species(params: &ModelParams, r: usize) -> Result<Vec<SingleSpeciesRoot>> {
    params.validate()?;
    let n = params.n;
    let j = params.j1;
    let u = params.u1;
    let delta = params.delta;
    let hardcore = params.u1_infinite;
    let p_tot = params.momentum(r);
    let c = (p_tot / 2.0).cos();

    let mut real_ks: Vec<f64> = Vec::new();
    // The grid is exact in two limits: half-integer momenta when the
    // scattering factor is pinned at −1 (hard core, or a flat band with
    // interaction), integer momenta for the free case.
    let pinned = hardcore || (j == 0.0 && u != 0.0);
    if pinned || u == 0.0 {
        for l in 0..n {
            let k = if pinned {
                PI * (2 * l + 1) as f64 / n as f64
            } else {
                2.0 * PI * l as f64 / n as f64
            };
            real_ks.push(k);
        }
    } else {
        // Phase function g(k) = kN − 2·atan2(U, x(k)) with
        // x = 2J(sin k − sin q); roots solve g(k) = 2πm.
        let g = |k: f64| -> f64 {
            let x = 2.0 * j * (k.sin() - (p_tot - k).sin());
            k * n as f64 - 2.0 * u.atan2(x)
        };
        let grid = 64 * n;
        let step = 2.0 * PI / grid as f64;
        let mut values = Vec::with_capacity(grid + 1);
        for i in 0..=grid {
            values.push(g(i as f64 * step));
        }
        let m_lo = (values
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
            / (2.0 * PI))
            .floor() as i64
            - 1;
        let m_hi = (values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
            / (2.0 * PI))
            .ceil() as i64
            + 1;
        for m in m_lo..=m_hi {
            let level = 2.0 * PI * m as f64;
            for i in 0..grid {
                let (fa, fb) = (values[i] - level, values[i + 1] - level);
                if fa == 0.0 {
                    real_ks.push(i as f64 * step);
                    continue;
                }
                if fa * fb < 0.0 {
                    let (mut a, mut b) = (i as f64 * step, (i + 1) as f64 * step);
                    let mut fa = fa;
                    for _ in 0..100 {
                        let mid = 0.5 * (a + b);
                        let fm = g(mid) - level;
                        if fa * fm <= 0.0 {
                            b = mid;
                        } else {
                            a = mid;
                            fa = fm;
                        }
                        if b - a < 1e-13 {
                            break;
                        }
                    }
                    real_ks.push(0.5 * (a + b));
                }
            }
        }
    }

    // Deduplicate k ↔ q = P − k (one state per unordered momentum pair).
    let mut roots: Vec<SingleSpeciesRoot> = Vec::new();
    let mut seen: Vec<(f64, f64)> = Vec::new();
    for &k in &real_ks {
        let k = wrap_2pi(k);
        let q = wrap_2pi(p_tot - k);
        let key = (k.min(q), k.max(q));
        if seen
            .iter()
            .any(|&(a, b)| (a - key.0).abs() < 1e-8 && (b - key.1).abs() < 1e-8)
        {
            continue;
        }
        seen.push(key);
        let kc = Complex64::new(k, 0.0);
        let qc = Complex64::new(q, 0.0);
        let s = if hardcore {
            Complex64::new(-1.0, 0.0)
        } else {
            scattering_factor(kc, qc, u, j)?
        };
        let self_paired = ((k - q).sin().abs() < 1e-9) && ((k - q).cos() - 1.0).abs() < 1e-9;
        let vanishing = self_paired && (s + Complex64::new(1.0, 0.0)).norm() < 1e-9;
        let bethe_residual = ((-Complex64::i() * kc * n as f64).exp() - s).norm();
        roots.push(SingleSpeciesRoot {
            k: kc,
            q: qc,
            s,
            energy: 2.0 * delta - 2.0 * j * (k.cos() + q.cos()),
            bethe_residual,
            bound: false,
            vanishing,
            onsite: false,
        });
    }

    // Bound root: k = P/2 + (π) − iK.  The quantization reduces to
    //   parity · e^{−KN} = (4Jc sinh K ∓ U) / (4Jc sinh K ± U)
    // with the π-shifted branch for repulsion and the unshifted one for
    // attraction; both are scanned.
    if !hardcore && u != 0.0 && j != 0.0 && c.abs() > 1e-12 {
        let fourjc = 4.0 * j * c;
        for shifted in [true, false] {
            let parity = if shifted {
                if (r + n) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            } else if r % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            let ratio = |kappa: f64| -> f64 {
                let sh = fourjc * kappa.sinh();
                if shifted {
                    (sh - u) / (sh + u)
                } else {
                    (sh + u) / (sh - u)
                }
            };
            let f = |kappa: f64| ratio(kappa) - parity * (-kappa * n as f64).exp();
            let k_max = ((u.abs() + 4.0 * (j * c).abs() + 10.0) / fourjc.abs()).asinh() + 5.0;
            let scan = 4000;
            let mut prev_k = 1e-9;
            let mut prev_f = f(prev_k);
            for i in 1..=scan {
                let kap = 1e-9 + (k_max - 1e-9) * i as f64 / scan as f64;
                let fv = f(kap);
                if prev_f.is_finite() && fv.is_finite() && prev_f * fv < 0.0 {
                    let (mut a, mut b, mut fa) = (prev_k, kap, prev_f);
                    for _ in 0..200 {
                        let mid = 0.5 * (a + b);
                        let fm = f(mid);
                        if fa * fm <= 0.0 {
                            b = mid;
                        } else {
                            a = mid;
                            fa = fm;
                        }
                    }
                    let kappa = 0.5 * (a + b);
                    let shift = if shifted { PI } else { 0.0 };
                    let kc = Complex64::new(p_tot / 2.0 + shift, -kappa);
                    let qc = Complex64::new(p_tot, 0.0) - kc;
                    // A sign change across a pole of the ratio is not a root;
                    // the singular factor (and the residual gate) weed it out.
                    let s = match scattering_factor(kc, qc, u, j) {
                        Ok(s) => s,
                        Err(_) => {
                            prev_k = kap;
                            prev_f = fv;
                            continue;
                        }
                    };
                    let residual = ((-Complex64::i() * kc * n as f64).exp() - s).norm();
                    if residual < 1e-8 {
                        let energy_c = 2.0 * delta - 2.0 * j * (kc.cos() + qc.cos());
                        roots.push(SingleSpeciesRoot {
                            k: kc,
                            q: qc,
                            s,
                            energy: energy_c.re,
                            bethe_residual: residual,
                            bound: true,
                            vanishing: false,
                            onsite: false,
                        });
                    }
                }
                prev_k = kap;
                prev_f = fv;
            }
        }
    }

    // When the relative hopping scale 4J·cos(P/2) vanishes the sector is
    // flat and one additional exact eigenstate exists outside the plane-wave
    // parametrization: the localized on-site pair at ε = 2Δ + U.
    if !hardcore && u != 0.0 && (j == 0.0 || c.abs() < 1e-12) {
        roots.push(SingleSpeciesRoot {
            k: Complex64::new(p_tot / 2.0 + PI, f64::NEG_INFINITY),
            q: Complex64::new(p_tot / 2.0 - PI, f64::INFINITY),
            s: Complex64::new(-1.0, 0.0),
            energy: 2.0 * delta + u,
            bethe_residual: 0.0,
            bound: true,
            vanishing: false,
            onsite: true,
        });
    }

    let found = roots.iter().filter(|root| !root.vanishing).count();
    let expected = sector_state_count(n, r, hardcore);
    if found != expected {
        return Err(Error::RootCountMismatch { expected, found });
    }
    Ok(roots)
}
