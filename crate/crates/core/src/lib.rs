//! Single-excitation physics of one or two "giant" two-level atoms, each
//! coupled at two separated sites to a one-dimensional coupled-resonator
//! waveguide with dispersion `w(k) = -2 h cos k`.
//!
//! The crate computes, from the same parameter set and without any fitting:
//!
//! - spectral densities and the time-domain memory kernel ([`model`]);
//! - the exact discrete spectrum: bound states outside the continuum (BOCs,
//!   type I and type II) and bound states in the continuum (BICs), with their
//!   residue weights ([`spectrum`]);
//! - exact non-Markovian dynamics by direct integration of the Volterra
//!   integro-differential equation, an independent finite-lattice oracle,
//!   Wigner-Weisskopf and Born-Markov approximations, and residue-based
//!   steady states ([`dynamics`]);
//! - populations, the two-atom reduced density matrix, and Wootters
//!   concurrence ([`observables`]);
//! - oscillation-frequency extraction from late-time population records
//!   ([`signal`]).
//!
//! Energies are measured in units of the resonator hopping `h` (default 1)
//! and times in `1/h`.

pub mod dynamics;
pub mod model;
pub mod observables;
pub mod quad;
pub mod signal;
pub mod spectrum;

pub use model::{Channel, ModelError, SystemParams};
pub use spectrum::{BocType, BoundState, SpectralChannel, SpectrumOptions, SpectrumResult, StateClass};
