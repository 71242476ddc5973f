//! Bound-pair (doublon) dispersion branches and the hard-core region
//! partition of the drive-coupled two-excitation spectrum.
//!
//! In the symmetric model (equal hoppings, equal on-site interactions, zero
//! detuning) the scalar binding condition integrates in closed form and
//! yields up to three branches: below both dressed continua, inside the
//! central gap, and above both continua.  For general parameters the
//! branches are located as zeros of the thermodynamic kernel determinant
//! scanned over the windows left open by the dressed two-excitation bands.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::enumerate::{enumerate_sector, StateFamily};
use crate::error::{Error, Result};
use crate::kernel::kernel_roots;
use crate::model::single_excitation_solve;
use crate::params::ModelParams;
use crate::state::TwoExcitationState;

/// Where a bound branch sits relative to the two-excitation continua.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BranchId {
    /// Below every continuum (attractive interactions).
    Below,
    /// Inside the gap between the drive-split continua.
    Middle,
    /// Above every continuum (repulsive interactions).
    Above,
}

/// One bound-pair dispersion branch sampled on a grid of total momenta.
#[derive(Debug, Clone)]
pub struct DoublonBranch {
    pub branch_id: BranchId,
    /// (P, ε(P)) samples, ordered like the requested momentum grid.
    pub samples: Vec<(f64, f64)>,
    /// Spatial decay rate of the relative wavefunction at each sample.
    pub decay_constants: Vec<f64>,
    /// dε/dP at each sample, by centred differences on the sampled grid.
    pub group_velocity: Vec<f64>,
}

/// Spectral regions of the hard-core symmetric model at fixed total
/// momentum, ordered bottom-up in energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    BelowBands,
    LowerBand,
    MidGap,
    UpperBand,
    AboveBands,
}

/// A coupled-sector eigenstate labelled by its spectral region.
#[derive(Debug, Clone)]
pub struct RegionState {
    pub region: Region,
    pub energy: f64,
    /// Total-momentum index r (P = 2πr/N).
    pub p_index: usize,
    /// Decay rates of the evanescent pair channels (empty when the state is
    /// site-local or extended in every channel).
    pub decay_constants: Vec<f64>,
    /// Residual ‖Hψ − εψ‖ of the reconstructed eigenstate.
    pub residual: f64,
    pub state: TwoExcitationState,
}

/// Bound-pair dispersion branches over the given grid of total momenta.
///
/// Momenta at which a branch has no bound solution are skipped, so a branch
/// may carry fewer samples than the grid; branches with no samples at all
/// are omitted.
pub fn doublon_branches(params: &ModelParams, p_grid: &[f64]) -> Result<Vec<DoublonBranch>> {
    params.validate()?;
    if p_grid.is_empty() {
        return Err(Error::BadSize(0));
    }
    if params.u3 != 0.0 {
        return Err(Error::WrongMode(
            "bound-pair branches require zero inter-species interaction".into(),
        ));
    }
    let symmetric = params.j1 == params.j2
        && params.delta == 0.0
        && params.u1_infinite == params.u2_infinite
        && (params.both_hardcore() || params.u1 == params.u2);
    if symmetric {
        symmetric_branches(params, p_grid)
    } else {
        general_branches(params, p_grid)
    }
}

/// √((ε + 2Ω)² − a²) and √((ε − 2Ω)² − a²) with a = 4J|cos(P/2)|.
fn channel_radicals(eps: f64, om: f64, a: f64) -> (f64, f64) {
    let plus = ((eps + 2.0 * om).powi(2) - a * a).sqrt();
    let minus = ((eps - 2.0 * om).powi(2) - a * a).sqrt();
    (plus, minus)
}

/// Interaction strength with a bound pair above both continua.
fn u_above(eps: f64, om: f64, a: f64) -> f64 {
    let (sp, sm) = channel_radicals(eps, om, a);
    2.0 * sp * sm / (sp + sm)
}

/// Interaction strength with a bound pair inside the drive-split gap
/// (positive for ε < 0, negative for ε > 0).
fn u_middle(eps: f64, om: f64, a: f64) -> f64 {
    let (sp, sm) = channel_radicals(eps, om, a);
    2.0 * sp * sm / (sm - sp)
}

/// Interaction strength with a bound pair below both continua.
fn u_below(eps: f64, om: f64, a: f64) -> f64 {
    let (sp, sm) = channel_radicals(eps, om, a);
    -2.0 * sp * sm / (sp + sm)
}

fn invert_closed<F>(f: F, target: f64, lo: f64, hi: f64) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let flo = f(lo) - target;
    if flo == 0.0 {
        return Some(lo);
    }
    let fhi = f(hi) - target;
    if fhi == 0.0 {
        return Some(hi);
    }
    if (flo > 0.0) == (fhi > 0.0) {
        return None;
    }
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) - target > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Smallest decay rate among the evanescent dressed channels at ±2Ω.
/// Returns `None` when no channel is evanescent (the energy touches a
/// continuum) and +∞ for a fully site-local pair (a = 0).
fn decay_from_channels(eps: f64, om: f64, a: f64) -> Option<f64> {
    if a == 0.0 {
        return Some(f64::INFINITY);
    }
    let mut best = f64::INFINITY;
    let mut any = false;
    for offset in [2.0 * om, -2.0 * om] {
        let arg = (eps - offset).abs() / a;
        if arg > 1.0 {
            any = true;
            best = best.min(arg.acosh());
        }
    }
    any.then_some(best)
}

fn group_velocities(samples: &[(f64, f64)]) -> Vec<f64> {
    let n = samples.len();
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|i| {
                let (lo, hi) = if i == 0 {
                    (0, 1)
                } else if i == n - 1 {
                    (n - 2, n - 1)
                } else {
                    (i - 1, i + 1)
                };
                (samples[hi].1 - samples[lo].1) / (samples[hi].0 - samples[lo].0)
            })
            .collect(),
    }
}

fn assemble(rows: BTreeMap<(BranchId, usize), Vec<(f64, f64, f64)>>) -> Vec<DoublonBranch> {
    rows.into_iter()
        .filter(|(_, v)| !v.is_empty())
        .map(|((branch_id, _), rows)| {
            let samples: Vec<(f64, f64)> = rows.iter().map(|&(p, e, _)| (p, e)).collect();
            let decay_constants = rows.iter().map(|&(_, _, k)| k).collect();
            let group_velocity = group_velocities(&samples);
            DoublonBranch {
                branch_id,
                samples,
                decay_constants,
                group_velocity,
            }
        })
        .collect()
}

fn symmetric_branches(params: &ModelParams, p_grid: &[f64]) -> Result<Vec<DoublonBranch>> {
    let om = params.omega.abs();
    let j = params.j1.abs();
    let mut rows: BTreeMap<(BranchId, usize), Vec<(f64, f64, f64)>> = BTreeMap::new();
    let mut push = |id: BranchId, p: f64, eps: f64, decay: f64| {
        rows.entry((id, 0)).or_default().push((p, eps, decay));
    };

    for &p in p_grid {
        let c = (0.5 * p).cos().abs();
        let a = 4.0 * j * c;

        if params.both_hardcore() {
            // The gap pair is pinned at ε = 0 exactly; it exists wherever
            // both dressed channels are evanescent there.
            if let Some(k) = decay_from_channels(0.0, om, a) {
                push(BranchId::Middle, p, 0.0, k);
            }
            continue;
        }

        let u = params.u1;
        if u == 0.0 {
            continue;
        }

        if params.omega == 0.0 {
            // Undriven limit: a single pair branch at ±√(U² + a²) with
            // a sinh-type decay law.
            let eps = u.signum() * (u * u + a * a).sqrt();
            let decay = if a > 0.0 {
                (u.abs() / a).asinh()
            } else {
                f64::INFINITY
            };
            let id = if u > 0.0 { BranchId::Above } else { BranchId::Below };
            push(id, p, eps, decay);
            continue;
        }

        let margin = 1e-9 * (1.0 + 2.0 * om + a);
        if u > 0.0 {
            // Gap branch at negative energy, when the gap is open.
            let gap = 2.0 * om - a;
            if gap > 2.0 * margin {
                if let Some(eps) =
                    invert_closed(|e| u_middle(e, om, a), u, -gap + margin, -1e-12 * (1.0 + gap))
                {
                    let k = decay_from_channels(eps, om, a).unwrap_or(f64::INFINITY);
                    push(BranchId::Middle, p, eps, k);
                }
            }
            // Branch above both continua.
            let edge = 2.0 * om + a;
            let mut hi = edge + u.abs() + 8.0 * j + 4.0 * om + 10.0;
            for _ in 0..60 {
                if u_above(hi, om, a) > u {
                    break;
                }
                hi = edge + (hi - edge) * 2.0;
            }
            if let Some(eps) = invert_closed(|e| u_above(e, om, a), u, edge + margin, hi) {
                let k = decay_from_channels(eps, om, a).unwrap_or(f64::INFINITY);
                push(BranchId::Above, p, eps, k);
            }
        } else {
            // Attractive mirror images: below both continua, and in the gap
            // at positive energy.
            let edge = -(2.0 * om + a);
            let mut lo = edge - (u.abs() + 8.0 * j + 4.0 * om + 10.0);
            for _ in 0..60 {
                if u_below(lo, om, a) < u {
                    break;
                }
                lo = edge + (lo - edge) * 2.0;
            }
            if let Some(eps) = invert_closed(|e| u_below(e, om, a), u, lo, edge - margin) {
                let k = decay_from_channels(eps, om, a).unwrap_or(f64::INFINITY);
                push(BranchId::Below, p, eps, k);
            }
            let gap = 2.0 * om - a;
            if gap > 2.0 * margin {
                if let Some(eps) =
                    invert_closed(|e| u_middle(e, om, a), u, 1e-12 * (1.0 + gap), gap - margin)
                {
                    let k = decay_from_channels(eps, om, a).unwrap_or(f64::INFINITY);
                    push(BranchId::Middle, p, eps, k);
                }
            }
        }
    }

    Ok(assemble(rows))
}

/// Dressed two-excitation band intervals at one total momentum, merged when
/// they touch or overlap.
fn merged_bands(params: &ModelParams, p_total: f64) -> Vec<(f64, f64)> {
    const KGRID: usize = 2048;
    let mut intervals = [(f64::INFINITY, f64::NEG_INFINITY); 4];
    for m in 0..KGRID {
        let k = TAU * m as f64 / KGRID as f64;
        let one = single_excitation_solve(params, k);
        let two = single_excitation_solve(params, p_total - k);
        let sums = [
            one.eps_minus + two.eps_minus,
            one.eps_minus + two.eps_plus,
            one.eps_plus + two.eps_minus,
            one.eps_plus + two.eps_plus,
        ];
        for (iv, sum) in intervals.iter_mut().zip(sums) {
            iv.0 = iv.0.min(sum);
            iv.1 = iv.1.max(sum);
        }
    }
    let mut intervals = intervals.to_vec();
    intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for iv in intervals {
        match merged.last_mut() {
            Some(last) if iv.0 <= last.1 + 1e-9 => last.1 = last.1.max(iv.1),
            _ => merged.push(iv),
        }
    }
    merged
}

/// Decay-rate estimate from the large-distance falloff of the channel
/// Green functions, min over the four dressed channels.
fn general_decay(params: &ModelParams, p_total: f64, eps: f64) -> f64 {
    const M: usize = 2048;
    let (r1, r2) = (6.0, 12.0);
    let mut best = f64::INFINITY;
    for combo in 0..4 {
        let mut g1 = Complex64::new(0.0, 0.0);
        let mut g2 = Complex64::new(0.0, 0.0);
        let mut regular = true;
        for m in 0..M {
            let k = TAU * m as f64 / M as f64;
            let one = single_excitation_solve(params, k);
            let two = single_excitation_solve(params, p_total - k);
            let band = match combo {
                0 => one.eps_minus + two.eps_minus,
                1 => one.eps_minus + two.eps_plus,
                2 => one.eps_plus + two.eps_minus,
                _ => one.eps_plus + two.eps_plus,
            };
            let den = eps - band;
            if den.abs() < 1e-9 {
                regular = false;
                break;
            }
            g1 += Complex64::from_polar(1.0 / den, k * r1);
            g2 += Complex64::from_polar(1.0 / den, k * r2);
        }
        if !regular {
            continue;
        }
        let n1 = g1.norm() / M as f64;
        let n2 = g2.norm() / M as f64;
        if n1 > 1e-14 && n2 > 1e-14 && n2 < n1 {
            best = best.min((n1 / n2).ln() / (r2 - r1));
        }
    }
    best
}

fn general_branches(params: &ModelParams, p_grid: &[f64]) -> Result<Vec<DoublonBranch>> {
    if params.any_hardcore() {
        return Err(Error::WrongMode(
            "the thermodynamic branch search needs finite on-site interactions; hard-core \
             pairs are only available in the symmetric reduction"
                .into(),
        ));
    }
    const PANELS: usize = 4096;
    // Margin absorbing the sampling error of the band envelopes.
    const EDGE_PAD: f64 = 1e-3;
    let reach =
        1.5 * (params.u1.abs() + params.u2.abs()) + 8.0 * (params.j1.abs() + params.j2.abs())
            + 4.0 * params.omega.abs()
            + 10.0;

    let mut rows: BTreeMap<(BranchId, usize), Vec<(f64, f64, f64)>> = BTreeMap::new();
    for &p in p_grid {
        let bands = merged_bands(params, p);
        let bottom = bands.first().map(|b| b.0).unwrap_or(0.0);
        let top = bands.last().map(|b| b.1).unwrap_or(0.0);

        let mut windows: Vec<(BranchId, f64, f64)> =
            vec![(BranchId::Below, bottom - reach, bottom - EDGE_PAD)];
        for pair in bands.windows(2) {
            let (lo, hi) = (pair[0].1 + EDGE_PAD, pair[1].0 - EDGE_PAD);
            if hi > lo {
                windows.push((BranchId::Middle, lo, hi));
            }
        }
        windows.push((BranchId::Above, top + EDGE_PAD, top + reach));

        let mut found: BTreeMap<BranchId, Vec<f64>> = BTreeMap::new();
        for (id, lo, hi) in windows {
            let roots = kernel_roots(params, p, lo, hi, PANELS)?;
            found.entry(id).or_default().extend(roots);
        }
        for (id, mut roots) in found {
            // Ordinals count from the continuum outward so that a branch
            // keeps its index when extra roots appear near the band edge.
            match id {
                BranchId::Above => roots.sort_by(|x, y| y.total_cmp(x)),
                _ => roots.sort_by(f64::total_cmp),
            }
            for (ordinal, eps) in roots.into_iter().enumerate() {
                let decay = general_decay(params, p, eps);
                rows.entry((id, ordinal)).or_default().push((p, eps, decay));
            }
        }
    }

    Ok(assemble(rows))
}

/// Classifies every coupled-channel eigenstate of one momentum sector of the
/// hard-core symmetric model by its spectral region.
pub fn enumerate_regions(params: &ModelParams, r: usize) -> Result<Vec<RegionState>> {
    params.validate()?;
    if !(params.both_hardcore() && params.j1 == params.j2 && params.delta == 0.0) {
        return Err(Error::WrongMode(
            "the spectral-region partition is defined for the hard-core model with equal \
             hoppings and zero detuning"
                .into(),
        ));
    }
    let om2 = 2.0 * params.omega.abs();
    let c = (0.5 * params.momentum(r)).cos().abs();
    let half = 4.0 * params.j1.abs() * c;
    let tol = 1e-6 * (1.0 + om2 + half);

    let mut out = Vec::new();
    for st in enumerate_sector(params, r)? {
        if !matches!(st.family, StateFamily::Coupled | StateFamily::FlatLocal) {
            continue;
        }
        let e = st.energy;
        let region = if e < -(om2 + half) - tol {
            Region::BelowBands
        } else if e <= -om2 + half + tol {
            Region::LowerBand
        } else if e < om2 - half - tol {
            Region::MidGap
        } else if e <= om2 + half + tol {
            Region::UpperBand
        } else {
            Region::AboveBands
        };
        let mut decay_constants = Vec::new();
        if c > 1e-8 {
            for offset in [om2, -om2] {
                let arg = (e - offset).abs() / half;
                if arg > 1.0 + 1e-12 {
                    decay_constants.push(arg.acosh());
                }
            }
        }
        // Species exchange commutes with the Hamiltonian under the gates
        // above, and the coupled channel lives in its symmetric sector.
        // Exact degeneracies with exchange-antisymmetric states (the gap
        // state at ε = 0 has such partners in even sectors) can leak a small
        // antisymmetric admixture into the numerically extracted vector, so
        // project it out before reporting the state.
        let symmetrized = {
            let s = &st.state;
            let a = (&s.a + &s.c) * Complex64::new(0.5, 0.0);
            TwoExcitationState {
                a: a.clone(),
                b: s.b_symmetric(),
                c: a,
                energy: s.energy,
                total_momentum_index: s.total_momentum_index,
            }
        };
        let state = if symmetrized.weighted_norm_sq() >= 0.5 {
            symmetrized.normalized()?
        } else {
            st.state
        };
        out.push(RegionState {
            region,
            energy: e,
            p_index: r,
            decay_constants,
            residual: st.residual,
            state,
        });
    }
    Ok(out)
}
