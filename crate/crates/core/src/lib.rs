//! Digital quantum simulation of a free staggered fermion in a 1+1
//! dimensional de Sitter universe.
//!
//! The crate builds the time-dependent Jordan-Wigner Hamiltonian as a sum of
//! Pauli strings ([`model`]), evolves basis states on a dense statevector with
//! first-order Trotter steps ([`evolution`], [`state`]), draws seeded Z-basis
//! shots ([`sampling`]) and evaluates the density, correlation, polarization
//! and chiral-condensate observables ([`observables`]). A midpoint-sampled
//! exact propagator and dense-matrix checks provide the verification oracles.

pub mod error;
pub mod evolution;
pub mod format;
pub mod model;
pub mod observables;
pub mod pauli;
pub mod sampling;
pub mod state;

pub use error::{Error, Result};
pub use evolution::{
    exact_evolve, exact_evolve_converged, trotter_error_scan, trotter_evolve, trotter_step,
    ExactPropagator, OracleSettings, TimeSampling, Trajectory, TrotterPlan, Trotterizer,
};
pub use model::{hamiltonian_at, HamiltonianParts, ModelParams};
pub use observables::{ObservableRecord, Source};
pub use pauli::{Axis, PauliString, PauliSum};
pub use sampling::{sample_z_basis, ShotCounts};
pub use state::StateVector;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
