//! Quench dynamics in the two-excitation sector.
//!
//! A [`Trajectory`] samples the evolved state `ψ(t) = e^{−iHt} ψ(0)` on a
//! caller-supplied time grid and records an observable series per sample.
//! Two independent routes produce it:
//!
//! * **Spectral** — expand the initial state over the eigenbasis and attach
//!   exact phases `e^{−iE_i t}`.  Exact to eigensolver precision at any time;
//!   this is the default route.
//! * **Integrator** — classic fourth-order Runge–Kutta on the packed
//!   Schrödinger equation, with the step bounded by `0.01 / max|E|`.  It
//!   exists as an independent cross-check and for norm-drift studies.

use crate::error::{Error, Result};
use crate::hamiltonian::{build_hamiltonian, HamiltonianMatrix};
use crate::observables::{entanglement_entropy, ipr, n_db, n_db_linear, EntanglementCut};
use crate::params::ModelParams;
use crate::state::TwoExcitationState;
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Fewest samples a statistics window must contain.
const MIN_WINDOW_SAMPLES: usize = 10;
/// Integrator stability factor: dt ≤ 0.01 / max|E|.
const STEP_FACTOR: f64 = 0.01;

/// Which evolution route to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolutionMethod {
    /// Eigenbasis expansion with exact phases (default).
    Spectral,
    /// Fourth-order Runge–Kutta integration of `i dψ/dt = Hψ`.
    Integrator,
}

/// A sampled evolution: times, optional state snapshots, and named
/// observable series aligned with the times.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Strictly increasing sample times, in units of 1/J.
    pub times: Vec<f64>,
    /// State snapshots, when recorded.
    pub states: Option<Vec<TwoExcitationState>>,
    /// Observable series by name; every vector has `times.len()` entries.
    /// Recorded names: `norm`, `energy`, `ipr`, `s0`, `s1`, `s2`, `s_total`,
    /// `n_db`, `n_db_linear`.
    pub series: BTreeMap<String, Vec<f64>>,
}

impl Trajectory {
    /// The named series, if recorded.
    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.series.get(name).map(Vec::as_slice)
    }
}

/// Staged evolution driver: building one borrows the Hamiltonian once;
/// [`Evolver::with_spectral_basis`] additionally completes the
/// diagonalization required by the spectral route.
pub struct Evolver {
    h: HamiltonianMatrix,
    spectral: Option<(Array1<f64>, Array2<Complex64>)>,
}

impl Evolver {
    /// Builds the dense two-excitation Hamiltonian for `params`.
    pub fn new(params: &ModelParams) -> Result<Self> {
        Ok(Evolver {
            h: build_hamiltonian(params)?,
            spectral: None,
        })
    }

    /// Completes the eigendecomposition needed for spectral evolution.
    pub fn with_spectral_basis(mut self) -> Result<Self> {
        if self.spectral.is_none() {
            self.spectral = Some(self.h.eigensystem()?);
        }
        Ok(self)
    }

    /// Largest admissible integrator step, `0.01 / max|E|`.
    ///
    /// With a completed diagonalization the bound uses the exact extremal
    /// eigenvalue; otherwise it falls back on the row-sum norm of H, which
    /// dominates every |E|.
    pub fn stability_bound(&self) -> f64 {
        let scale = match &self.spectral {
            Some((vals, _)) => vals.iter().fold(0.0f64, |m, &e| m.max(e.abs())),
            None => {
                let h = self.h.entries();
                (0..h.nrows())
                    .map(|i| h.row(i).iter().map(|z| z.norm()).sum::<f64>())
                    .fold(0.0f64, f64::max)
            }
        };
        if scale <= f64::MIN_POSITIVE {
            f64::INFINITY
        } else {
            STEP_FACTOR / scale
        }
    }

    /// Evolves `initial` (the state at t = 0) and samples it at `times`.
    pub fn evolve(
        &self,
        initial: &TwoExcitationState,
        times: &[f64],
        method: EvolutionMethod,
    ) -> Result<Trajectory> {
        match method {
            EvolutionMethod::Spectral => self.evolve_spectral(initial, times),
            EvolutionMethod::Integrator => {
                let dt = self.stability_bound();
                self.integrate(initial, times, dt)
            }
        }
    }

    /// Runge–Kutta evolution with a caller-chosen internal step.
    pub fn evolve_with_step(
        &self,
        initial: &TwoExcitationState,
        times: &[f64],
        dt: f64,
    ) -> Result<Trajectory> {
        let bound = self.stability_bound();
        if !(dt > 0.0) || dt > bound {
            return Err(Error::StepTooLarge { dt, bound });
        }
        self.integrate(initial, times, dt)
    }

    fn prepare(&self, initial: &TwoExcitationState, times: &[f64]) -> Result<Array1<Complex64>> {
        validate_times(times)?;
        let norm_sq = initial.weighted_norm_sq();
        if (norm_sq - 1.0).abs() > 1e-8 {
            return Err(Error::NotNormalized(norm_sq));
        }
        let v = self.h.basis().pack(initial);
        let packed_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let outside = norm_sq - packed_sq;
        if outside.abs() > 1e-8 {
            return Err(Error::Config(format!(
                "initial state places weight {outside:.3e} outside the model space \
                 (hard-core exclusion removes same-site same-species pairs)"
            )));
        }
        Ok(v)
    }

    fn evolve_spectral(&self, initial: &TwoExcitationState, times: &[f64]) -> Result<Trajectory> {
        let (energies, vectors) = self
            .spectral
            .as_ref()
            .ok_or(Error::DiagonalizationMissing)?;
        let v0 = self.prepare(initial, times)?;
        let coeffs = vectors.t().mapv(|z| z.conj()).dot(&v0);
        let mut recorder = Recorder::new(self, times.len());
        for &t in times {
            if t == 0.0 {
                recorder.record(t, &v0, Some(initial))?;
                continue;
            }
            let phased: Array1<Complex64> = coeffs
                .iter()
                .zip(energies.iter())
                .map(|(c, &e)| c * Complex64::from_polar(1.0, -e * t))
                .collect();
            let v = vectors.dot(&phased);
            recorder.record(t, &v, None)?;
        }
        Ok(recorder.finish(times))
    }

    fn integrate(
        &self,
        initial: &TwoExcitationState,
        times: &[f64],
        dt: f64,
    ) -> Result<Trajectory> {
        let mut v = self.prepare(initial, times)?;
        let h = self.h.entries();
        let rhs = |v: &Array1<Complex64>| -> Array1<Complex64> {
            h.dot(v).mapv(|z| z * Complex64::new(0.0, -1.0))
        };
        let mut recorder = Recorder::new(self, times.len());
        let mut t_now = 0.0;
        for &t in times {
            let gap = t - t_now;
            if gap > 0.0 {
                let dt = if dt.is_finite() { dt } else { gap };
                let steps = (gap / dt).ceil().max(1.0) as usize;
                let h_step = gap / steps as f64;
                for _ in 0..steps {
                    let k1 = rhs(&v);
                    let k2 = rhs(&(&v + &(&k1 * Complex64::new(h_step / 2.0, 0.0))));
                    let k3 = rhs(&(&v + &(&k2 * Complex64::new(h_step / 2.0, 0.0))));
                    let k4 = rhs(&(&v + &(&k3 * Complex64::new(h_step, 0.0))));
                    let incr = (k1 + k2.mapv(|z| z * 2.0) + k3.mapv(|z| z * 2.0) + k4)
                        .mapv(|z| z * (h_step / 6.0));
                    v = &v + &incr;
                }
                t_now = t;
            }
            if t == 0.0 {
                recorder.record(t, &v, Some(initial))?;
            } else {
                recorder.record(t, &v, None)?;
            }
        }
        Ok(recorder.finish(times))
    }
}

/// Collects snapshots and per-snapshot observable series.
struct Recorder<'a> {
    evolver: &'a Evolver,
    states: Vec<TwoExcitationState>,
    series: BTreeMap<String, Vec<f64>>,
}

const SERIES_NAMES: [&str; 9] = [
    "norm",
    "energy",
    "ipr",
    "s0",
    "s1",
    "s2",
    "s_total",
    "n_db",
    "n_db_linear",
];

impl<'a> Recorder<'a> {
    fn new(evolver: &'a Evolver, capacity: usize) -> Self {
        let mut series = BTreeMap::new();
        for name in SERIES_NAMES {
            series.insert(name.to_string(), Vec::with_capacity(capacity));
        }
        Recorder {
            evolver,
            states: Vec::with_capacity(capacity),
            series,
        }
    }

    fn push(&mut self, name: &str, value: f64) {
        self.series.get_mut(name).expect("series preallocated").push(value);
    }

    fn record(
        &mut self,
        _t: f64,
        v: &Array1<Complex64>,
        exact: Option<&TwoExcitationState>,
    ) -> Result<()> {
        let state = match exact {
            Some(s) => s.clone(),
            None => self.evolver.h.basis().unpack(v),
        };
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let hv = self.evolver.h.entries().dot(v);
        let energy = v
            .iter()
            .zip(hv.iter())
            .map(|(a, b)| (a.conj() * b).re)
            .sum::<f64>()
            / norm_sq;
        self.push("norm", norm_sq.sqrt());
        self.push("energy", energy);
        // Diagnostics act on the renormalized physical state so that
        // integrator norm drift cannot trip their normalization gates.
        let unit = state.normalized()?;
        self.push("ipr", ipr(&unit)?);
        let rep = entanglement_entropy(&unit, EntanglementCut::Coupled)?;
        self.push("s0", rep.s0);
        self.push("s1", rep.s1);
        self.push("s2", rep.s2);
        self.push("s_total", rep.s_total);
        self.push("n_db", n_db(&unit)?);
        self.push("n_db_linear", n_db_linear(&unit)?);
        self.states.push(state);
        Ok(())
    }

    fn finish(self, times: &[f64]) -> Trajectory {
        Trajectory {
            times: times.to_vec(),
            states: Some(self.states),
            series: self.series,
        }
    }
}

fn validate_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::Config("evolution needs at least one sample time".into()));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::Config("evolution times must be finite".into()));
    }
    if times[0] < 0.0 {
        return Err(Error::Config(
            "evolution times must be non-negative (the initial state is ψ(0))".into(),
        ));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("evolution times must be strictly increasing".into()));
    }
    Ok(())
}

/// Evolves `initial` under `params` and samples at `times`.
///
/// Convenience wrapper that performs whatever preparation the chosen method
/// needs (the spectral route diagonalizes once).  `initial` is the state at
/// t = 0 and must be normalized.
pub fn evolve(
    initial: &TwoExcitationState,
    params: &ModelParams,
    times: &[f64],
    method: EvolutionMethod,
) -> Result<Trajectory> {
    let evolver = match method {
        EvolutionMethod::Spectral => Evolver::new(params)?.with_spectral_basis()?,
        EvolutionMethod::Integrator => Evolver::new(params)?,
    };
    evolver.evolve(initial, times, method)
}

/// Arithmetic mean and population standard deviation of the named series
/// over the closed window `t0 ≤ t ≤ t1`.
///
/// The window must select at least 10 samples.
pub fn late_time_stats(
    traj: &Trajectory,
    series_name: &str,
    window: (f64, f64),
) -> Result<(f64, f64)> {
    let (t0, t1) = window;
    let values = traj.series.get(series_name).ok_or_else(|| {
        Error::Config(format!("unknown trajectory series `{series_name}`"))
    })?;
    let selected: Vec<f64> = traj
        .times
        .iter()
        .zip(values.iter())
        .filter(|(&t, _)| t >= t0 && t <= t1)
        .map(|(_, &v)| v)
        .collect();
    if selected.len() < MIN_WINDOW_SAMPLES {
        return Err(Error::EmptyWindow {
            t0,
            t1,
            min_samples: MIN_WINDOW_SAMPLES,
        });
    }
    let n = selected.len() as f64;
    let mean = selected.iter().sum::<f64>() / n;
    let var = selected.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Ok((mean, var.sqrt()))
}

/// `a†₀ b†₀ |0⟩`: one excitation of each species on site 0.
pub fn onsite_pair_ab(n: usize) -> TwoExcitationState {
    let mut s = TwoExcitationState::zero(n);
    s.b[[0, 0]] = Complex64::new(1.0, 0.0);
    s
}

/// `(1/√2) a†₀ a†₀ |0⟩`: a same-species pair on site 0.
pub fn onsite_pair_aa(n: usize) -> TwoExcitationState {
    let mut s = TwoExcitationState::zero(n);
    s.a[[0, 0]] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    s
}

/// The grid `0, dt, 2·dt, …` up to and including `t_max` (within a relative
/// rounding guard).
pub fn uniform_times(t_max: f64, dt: f64) -> Vec<f64> {
    let count = (t_max / dt + 1e-9).floor() as usize;
    (0..=count).map(|i| i as f64 * dt).collect()
}

/// Angular frequency of the strongest spectral peak of `values` on the
/// uniform grid `times`, by discrete Fourier transform of the de-meaned
/// series.
pub fn dominant_frequency(times: &[f64], values: &[f64]) -> Result<f64> {
    if times.len() != values.len() {
        return Err(Error::Config(
            "frequency extraction needs one value per sample time".into(),
        ));
    }
    let n = times.len();
    if n < 8 {
        return Err(Error::Config(
            "frequency extraction needs at least 8 samples".into(),
        ));
    }
    let dt = times[1] - times[0];
    if dt <= 0.0
        || times
            .windows(2)
            .any(|w| ((w[1] - w[0]) - dt).abs() > 1e-6 * dt.abs())
    {
        return Err(Error::Config(
            "frequency extraction needs a uniform time grid".into(),
        ));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let mut best = (0usize, -1.0f64);
    for k in 1..=n / 2 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            let angle = -2.0 * std::f64::consts::PI * (k * j) as f64 / n as f64;
            acc += Complex64::from_polar(v - mean, angle);
        }
        let power = acc.norm_sqr();
        if power > best.1 {
            best = (k, power);
        }
    }
    Ok(2.0 * std::f64::consts::PI * best.0 as f64 / (n as f64 * dt))
}
