//! Momentum-space contact-coupling kernel for the two-excitation sector.
//!
//! With purely on-site interactions the two-excitation Schrödinger equation
//! closes on the two same-site pair amplitudes (one per species).
//! Eliminating the drive-hybridized background at total momentum `P` and
//! relative momentum `p` leaves a 2×2 back-coupling matrix `M(p)`; bound
//! pair energies solve `det(⟨M⟩ − 1) = 0`, where `⟨·⟩` averages over
//! relative momentum (a discrete sum on an N-site ring, an integral in the
//! thermodynamic limit).  Because every interaction is a contact term, the
//! periodic trapezoid average converges spectrally away from the continua.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::model::dispersion_pair;
use crate::params::ModelParams;

/// Absolute guard below which an energy denominator counts as resonant.
const POLE_GATE: f64 = 1e-12;

/// Energy offset used to retry an evaluation that landed on a resonance.
const POLE_RETRY_OFFSET: f64 = 1e-9;

/// Residual bound separating genuine roots of the averaged condition from
/// sign flips across its poles.
const ROOT_RESIDUAL_GATE: f64 = 1e-3;

/// Hybridization weight and back-coupling matrix at one relative momentum.
#[derive(Debug, Clone, Copy)]
pub struct MomentumKernel {
    /// Drive-induced hybridization weight η(p, P−p); symmetric in p ↔ P−p.
    pub eta: f64,
    /// 2×2 back-coupling onto the two on-site pair amplitudes.
    pub m: [[f64; 2]; 2],
}

/// Evaluates the hybridization weight and back-coupling matrix at one
/// relative momentum.  Fails with [`Error::PoleEncountered`] when the energy
/// is resonant with a background shell at this momentum.
pub fn momentum_kernel(
    params: &ModelParams,
    p_total: f64,
    eps: f64,
    p: f64,
) -> Result<MomentumKernel> {
    params.validate()?;
    if params.any_hardcore() {
        return Err(Error::WrongMode(
            "the momentum-space kernel needs finite on-site interactions".into(),
        ));
    }
    let (wp, wpp) = dispersion_pair(params, p);
    let (wq, wqp) = dispersion_pair(params, p_total - p);
    let s = eps - wp - wq;
    let t = eps - wpp - wqp;
    if params.omega == 0.0 {
        if s.abs() < POLE_GATE || t.abs() < POLE_GATE {
            return Err(Error::PoleEncountered { eps });
        }
        return Ok(MomentumKernel {
            eta: 0.0,
            m: [[params.u1 / s, 0.0], [0.0, params.u2 / t]],
        });
    }
    let d1 = eps - wp - wqp;
    let d2 = eps - wq - wpp;
    if d1.abs() < POLE_GATE || d2.abs() < POLE_GATE {
        return Err(Error::PoleEncountered { eps });
    }
    let eta = params.omega * params.omega * (1.0 / d1 + 1.0 / d2);
    let denom = s * t - (s + t) * eta;
    if denom.abs() < POLE_GATE {
        return Err(Error::PoleEncountered { eps });
    }
    Ok(MomentumKernel {
        eta,
        m: [
            [(t - eta) * params.u1 / denom, eta * params.u2 / denom],
            [eta * params.u1 / denom, (s - eta) * params.u2 / denom],
        ],
    })
}

/// Cleared-form kernel entries used inside momentum averages.  The bare
/// mixed-shell resonances of the hybridization weight are removable in the
/// matrix itself, so this form divides only by the genuine dressed-shell
/// denominator.
fn kernel_matrix(params: &ModelParams, p_total: f64, eps: f64, p: f64) -> Result<[[f64; 2]; 2]> {
    let (wp, wpp) = dispersion_pair(params, p);
    let (wq, wqp) = dispersion_pair(params, p_total - p);
    let s = eps - wp - wq;
    let t = eps - wpp - wqp;
    if params.omega == 0.0 {
        if s.abs() < POLE_GATE || t.abs() < POLE_GATE {
            return Err(Error::PoleEncountered { eps });
        }
        return Ok([[params.u1 / s, 0.0], [0.0, params.u2 / t]]);
    }
    let d1 = eps - wp - wqp;
    let d2 = eps - wq - wpp;
    let g = params.omega * params.omega * (d1 + d2);
    let d12 = d1 * d2;
    let cleared = s * t * d12 - (s + t) * g;
    let scale = (s * t * d12).abs() + ((s + t) * g).abs() + 1.0;
    if cleared.abs() < 1e-13 * scale {
        return Err(Error::PoleEncountered { eps });
    }
    Ok([
        [(t * d12 - g) * params.u1 / cleared, g * params.u2 / cleared],
        [g * params.u1 / cleared, (s * d12 - g) * params.u2 / cleared],
    ])
}

fn condition_gates(params: &ModelParams) -> Result<()> {
    if params.any_hardcore() {
        return Err(Error::WrongMode(
            "the averaged pair-binding condition needs finite on-site interactions".into(),
        ));
    }
    if params.u3 != 0.0 {
        return Err(Error::WrongMode(
            "the averaged pair-binding condition requires zero inter-species interaction".into(),
        ));
    }
    Ok(())
}

fn averaged_condition<I>(
    params: &ModelParams,
    p_total: f64,
    eps: f64,
    momenta: I,
    count: usize,
) -> Result<f64>
where
    I: Iterator<Item = f64>,
{
    let mut q = [[0.0f64; 2]; 2];
    for p in momenta {
        let m = kernel_matrix(params, p_total, eps, p)?;
        for (qr, mr) in q.iter_mut().zip(m.iter()) {
            qr[0] += mr[0];
            qr[1] += mr[1];
        }
    }
    let w = 1.0 / count as f64;
    Ok((q[0][0] * w - 1.0) * (q[1][1] * w - 1.0) - q[0][1] * w * q[1][0] * w)
}

/// det(⟨M⟩ − 1) with the average taken over the N ring momenta of sector r.
/// Its zeros are the exact ring eigenvalues of the contact-coupled channel.
pub fn kernel_condition_finite(params: &ModelParams, r: usize, eps: f64) -> Result<f64> {
    params.validate()?;
    condition_gates(params)?;
    let n = params.n;
    let p_total = params.momentum(r);
    averaged_condition(
        params,
        p_total,
        eps,
        (0..n).map(|m| TAU * m as f64 / n as f64),
        n,
    )
}

/// det(⟨M⟩ − 1) with the average taken as a periodic trapezoid rule over
/// `panels` relative momenta (the thermodynamic limit).
pub fn kernel_condition(params: &ModelParams, p_total: f64, eps: f64, panels: usize) -> Result<f64> {
    params.validate()?;
    condition_gates(params)?;
    if panels < 2 {
        return Err(Error::Config("momentum average needs at least 2 panels".into()));
    }
    averaged_condition(
        params,
        p_total,
        eps,
        (0..panels).map(|i| TAU * i as f64 / panels as f64),
        panels,
    )
}

fn symmetric_gates(params: &ModelParams) -> Result<()> {
    if params.j1 != params.j2
        || params.delta != 0.0
        || params.any_hardcore()
        || params.u1 != params.u2
        || params.u3 != 0.0
    {
        return Err(Error::WrongMode(
            "the scalar reduction requires equal hoppings, equal finite on-site interactions, \
             zero detuning, and zero inter-species interaction"
                .into(),
        ));
    }
    Ok(())
}

/// Scalar symmetric-channel binding condition.  When both species share the
/// same hopping and on-site interaction at zero detuning, the symmetric
/// combination of pair amplitudes decouples and the 2×2 condition reduces to
/// U·⟨S/(S² − 4Ω²)⟩ − 1 with S = ε − ω_p − ω_{P−p}.  The reduction stays
/// regular across the mixed continuum, so it also reaches bound states that
/// are degenerate with it.
pub fn kernel_condition_symmetric(
    params: &ModelParams,
    p_total: f64,
    eps: f64,
    panels: usize,
) -> Result<f64> {
    params.validate()?;
    symmetric_gates(params)?;
    if panels < 2 {
        return Err(Error::Config("momentum average needs at least 2 panels".into()));
    }
    let two_omega = 2.0 * params.omega;
    let mut acc = 0.0;
    for i in 0..panels {
        let p = TAU * i as f64 / panels as f64;
        let (wp, _) = dispersion_pair(params, p);
        let (wq, _) = dispersion_pair(params, p_total - p);
        let s = eps - wp - wq;
        let lower = s - two_omega;
        let upper = s + two_omega;
        if lower.abs() < POLE_GATE || upper.abs() < POLE_GATE {
            return Err(Error::PoleEncountered { eps });
        }
        acc += params.u1 * s / (lower * upper);
    }
    Ok(acc / panels as f64 - 1.0)
}

fn eval_retry<F>(f: &F, x: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    match f(x) {
        Err(Error::PoleEncountered { .. }) => match f(x + POLE_RETRY_OFFSET) {
            Err(Error::PoleEncountered { .. }) => f(x - POLE_RETRY_OFFSET),
            other => other,
        },
        other => other,
    }
}

fn bisect_between<F>(f: &F, mut lo: f64, mut hi: f64, mut flo: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = eval_retry(f, mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scans `[lo, hi]`, bisects every sign change, and keeps the bisection
/// limits at which the condition actually vanishes (sign flips across poles
/// leave a large residual and are dropped).
fn scan_roots<F>(f: &F, lo: f64, hi: f64, npts: usize) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut roots: Vec<f64> = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=npts {
        let x = lo + (hi - lo) * i as f64 / npts as f64;
        let fx = match eval_retry(f, x) {
            Ok(v) if v.is_finite() => v,
            _ => {
                prev = None;
                continue;
            }
        };
        if fx == 0.0 {
            roots.push(x);
            prev = Some((x, fx));
            continue;
        }
        if let Some((x0, f0)) = prev {
            if (f0 > 0.0) != (fx > 0.0) {
                if let Ok(root) = bisect_between(f, x0, x, f0) {
                    let residual = eval_retry(f, root).map(f64::abs).unwrap_or(f64::INFINITY);
                    if residual < ROOT_RESIDUAL_GATE {
                        roots.push(root);
                    }
                }
            }
        }
        prev = Some((x, fx));
    }
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * (1.0 + b.abs()));
    Ok(roots)
}

/// All zeros of the thermodynamic condition inside `[lo, hi]`, ascending.
pub fn kernel_roots(
    params: &ModelParams,
    p_total: f64,
    lo: f64,
    hi: f64,
    panels: usize,
) -> Result<Vec<f64>> {
    params.validate()?;
    condition_gates(params)?;
    let f = |e: f64| kernel_condition(params, p_total, e, panels);
    scan_roots(&f, lo, hi, 512)
}

/// The zero of the finite-ring condition inside `[lo, hi]`; when several
/// zeros fall in the window the one with the smallest residual is returned.
pub fn kernel_root_finite(params: &ModelParams, r: usize, lo: f64, hi: f64) -> Result<f64> {
    params.validate()?;
    condition_gates(params)?;
    let f = |e: f64| kernel_condition_finite(params, r, e);
    scan_roots(&f, lo, hi, 256)?
        .into_iter()
        .map(|x| (x, eval_retry(&f, x).map(f64::abs).unwrap_or(f64::INFINITY)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(x, _)| x)
        .ok_or(Error::NoRoots)
}

/// Bisects the scalar symmetric condition on a sign-changing bracket.
pub fn kernel_root_symmetric(
    params: &ModelParams,
    p_total: f64,
    lo: f64,
    hi: f64,
    panels: usize,
) -> Result<f64> {
    params.validate()?;
    symmetric_gates(params)?;
    let f = |e: f64| kernel_condition_symmetric(params, p_total, e, panels);
    let flo = eval_retry(&f, lo)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    let fhi = eval_retry(&f, hi)?;
    if fhi == 0.0 {
        return Ok(hi);
    }
    if (flo > 0.0) == (fhi > 0.0) {
        return Err(Error::NoRoots);
    }
    bisect_between(&f, lo, hi, flo)
}
