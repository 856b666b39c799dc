//! Reaction path optimization where the path itself is produced by a
//! parameterized quantum circuit.
//!
//! The pipeline: unfixed atomic coordinates are encoded as single-qubit
//! probabilities ([`pathcircuit`]), a generator circuit transforms them, the
//! decoded path is scored with nudged-elastic-band forces ([`neb`]) whose
//! energies come from exact diagonalization or a Rotoselect VQE
//! ([`groundstate`]) over minimal-basis hydrogen-chain Hamiltonians
//! ([`hamiltonian`]), and Adam updates the circuit parameters ([`driver`]).

// `!(x > 0.0)` is the NaN-rejecting form of a positivity check
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod driver;
pub mod error;
pub mod groundstate;
pub mod hamiltonian;
pub mod neb;
pub mod pathcircuit;
pub mod simulator;

pub use error::{Error, Result};

/// Å per bohr.
pub const BOHR_IN_ANGSTROM: f64 = 0.52917721067;
