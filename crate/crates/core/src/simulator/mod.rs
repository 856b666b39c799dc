//! Dense statevector simulation.
//!
//! Qubit `m` corresponds to bit `m` of the basis-state index (little endian),
//! so `|q_{n-1} … q_1 q_0⟩` has index `Σ q_m 2^m`. Rotations follow
//! `R_P(φ) = exp(−iφP/2)`, giving `R_y(φ)|0⟩ = cos(φ/2)|0⟩ + sin(φ/2)|1⟩`.

mod circuit;
mod pauli;
mod state;

pub use circuit::{Circuit, Gate};
pub use pauli::{CompiledOperator, Observable, PauliLetter, PauliString, PauliTerm};
pub use state::StateVector;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 24;
