//! Model parameters for the coupled two-species Bose-Hubbard chain.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// All couplings of the two-species chain plus the lattice size.
///
/// The Hamiltonian is
/// `H = Δ Σ a†a + (U₁/2) Σ a†a†aa + (U₂/2) Σ b†b†bb + U₃ Σ n^a n^b
///      − Σ_j [J₁(a†_j a_{j+1} + h.c.) + J₂(b†_j b_{j+1} + h.c.)]
///      + Ω Σ (a†b + h.c.)`
/// on a periodic chain of `n` sites.
///
/// Hard-core ("U = ∞") interactions are a distinct mode selected by the
/// `u*_infinite` flags, never by a non-finite float: solvers then use the
/// exact infinite-repulsion equations (deleted doubly-occupied states,
/// scattering factor −1) instead of a large finite value.
/// Deserialization rejects unknown keys (typos surface as configuration
/// errors naming the key) and fills omitted keys with the documented
/// defaults: unit hoppings, all interactions off, ten sites.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Hopping amplitude of species a.
    #[serde(default = "default_hopping")]
    pub j1: f64,
    /// Hopping amplitude of species b.
    #[serde(default = "default_hopping")]
    pub j2: f64,
    /// On-site interaction of species a (ignored by solvers when `u1_infinite`).
    #[serde(default)]
    pub u1: f64,
    /// On-site interaction of species b (ignored by solvers when `u2_infinite`).
    #[serde(default)]
    pub u2: f64,
    /// On-site inter-species interaction.
    #[serde(default)]
    pub u3: f64,
    /// On-site Rabi coupling converting a ↔ b.
    #[serde(default)]
    pub omega: f64,
    /// Energy offset of species a relative to species b.
    #[serde(default)]
    pub delta: f64,
    /// Number of lattice sites (periodic boundary conditions).
    #[serde(default = "default_sites")]
    pub n: usize,
    /// Hard-core mode for species a.
    #[serde(default)]
    pub u1_infinite: bool,
    /// Hard-core mode for species b.
    #[serde(default)]
    pub u2_infinite: bool,
}

fn default_hopping() -> f64 {
    1.0
}

fn default_sites() -> usize {
    10
}

impl Default for ModelParams {
    /// The CLI baseline: J₁ = J₂ = 1, all interactions and the drive off,
    /// zero detuning, ten sites, soft-core.
    fn default() -> Self {
        ModelParams {
            j1: 1.0,
            j2: 1.0,
            u1: 0.0,
            u2: 0.0,
            u3: 0.0,
            omega: 0.0,
            delta: 0.0,
            n: 10,
            u1_infinite: false,
            u2_infinite: false,
        }
    }
}

impl ModelParams {
    /// Symmetric-species template: J₁ = J₂ = J, Δ = 0, finite interactions.
    pub fn symmetric(j: f64, u: f64, omega: f64, n: usize) -> Self {
        ModelParams {
            j1: j,
            j2: j,
            u1: u,
            u2: u,
            u3: 0.0,
            omega,
            delta: 0.0,
            n,
            u1_infinite: false,
            u2_infinite: false,
        }
    }

    /// Symmetric-species hard-core template (both species infinitely repulsive).
    pub fn symmetric_hardcore(j: f64, omega: f64, n: usize) -> Self {
        ModelParams {
            u1_infinite: true,
            u2_infinite: true,
            ..Self::symmetric(j, 0.0, omega, n)
        }
    }

    /// Checks the type invariants: N ≥ 2 and every coupling a finite real.
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::BadSize(self.n));
        }
        let fields: [(&'static str, f64); 7] = [
            ("j1", self.j1),
            ("j2", self.j2),
            ("u1", self.u1),
            ("u2", self.u2),
            ("u3", self.u3),
            ("omega", self.omega),
            ("delta", self.delta),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::NonFiniteParameter { name });
            }
        }
        Ok(())
    }

    /// Lattice momentum for integer index `r`: k = 2πr/N.
    pub fn momentum(&self, r: usize) -> f64 {
        2.0 * PI * r as f64 / self.n as f64
    }

    /// True when either species is in hard-core mode.
    pub fn any_hardcore(&self) -> bool {
        self.u1_infinite || self.u2_infinite
    }

    /// True when both species are hard-core.
    pub fn both_hardcore(&self) -> bool {
        self.u1_infinite && self.u2_infinite
    }
}
