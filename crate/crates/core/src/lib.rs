//! Simulation of a sinusoidally frequency-modulated qubit-boson (Rabi) system.
//!
//! Simultaneous modulation of the two-level-system and mode frequencies
//! suppresses the counter-rotating coupling without weakening the
//! rotating-wave (Jaynes-Cummings) coupling. This crate provides:
//!
//! - a truncated qubit ⊗ Fock Hilbert space with dense complex operators
//!   ([`hilbert`]),
//! - every Hamiltonian of the model as a time-dependent generator, in the
//!   lab and rotating frames ([`hamiltonian`]),
//! - a fixed-step RK4 Schrödinger propagator with norm monitoring and
//!   exact/target co-propagation for fidelity tracking ([`evolve`]),
//! - Bessel functions, Jacobi-Anger sideband decomposition, validity-
//!   condition reports, populations and state-transfer figures of merit
//!   ([`bessel`], [`analysis`]),
//! - the closed-form JC spectrum, ground-state identification and
//!   phase-diagram generation ([`spectrum`]),
//! - experiment presets, config-driven runs, sweeps and CSV/JSON output
//!   ([`config`], [`experiment`], [`table`]).
//!
//! All frequencies are ratios of a reference frequency (the TLS transition
//! frequency omega_0 = 1 in every preset); time is in units of its inverse.

pub mod analysis;
pub mod bessel;
pub mod config;
pub mod error;
pub mod evolve;
pub mod experiment;
pub mod hamiltonian;
pub mod hilbert;
pub mod model;
pub mod spectrum;
pub mod table;

pub use error::Error;

/// Crate result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Artifact version recorded in every output table's metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
