//! Two-excitation sector of one-dimensional coupled Bose-Hubbard chains.
//!
//! The crate builds and cross-validates three independent routes to the same
//! physics:
//!
//! * a brute-force exact-diagonalization oracle over the aa/ab/bb pair basis
//!   ([`basis`], [`hamiltonian`], [`spectra`]);
//! * analytic eigenstates assembled from two-plane-wave components with
//!   scattering factors, quantized by finite-size conditions ([`planewave`],
//!   [`bethe`], [`energy`], [`weights`], [`assemble`], [`enumerate`]);
//! * bound-pair (doublon) dispersion branches from closed-form relations and
//!   from a momentum-space kernel determinant ([`doublon`], [`kernel`]).
//!
//! On top of the eigenstates sit localization and entanglement diagnostics
//! ([`observables`]) and quench time evolution ([`dynamics`]).

pub mod assemble;
pub mod basis;
pub mod bethe;
pub mod planewave;
pub mod doublon;
pub mod dynamics;
pub mod energy;
pub mod enumerate;
pub mod error;
pub mod hamiltonian;
pub mod kernel;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod output;
pub mod params;
pub mod spectra;
pub mod state;
pub mod weights;

pub use error::{Error, Result};
