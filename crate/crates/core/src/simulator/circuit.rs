use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single gate. Rotation kinds carry an angle in radians; two-qubit kinds
/// carry a control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    Rx { target: usize, angle: f64 },
    Ry { target: usize, angle: f64 },
    Rz { target: usize, angle: f64 },
    Cz { control: usize, target: usize },
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn target(&self) -> usize {
        match *self {
            Gate::Rx { target, .. }
            | Gate::Ry { target, .. }
            | Gate::Rz { target, .. }
            | Gate::Cz { target, .. }
            | Gate::Cnot { target, .. } => target,
        }
    }

    pub fn control(&self) -> Option<usize> {
        match *self {
            Gate::Cz { control, .. } | Gate::Cnot { control, .. } => Some(control),
            _ => None,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx { angle, .. } | Gate::Ry { angle, .. } | Gate::Rz { angle, .. } => Some(angle),
            _ => None,
        }
    }

    pub(crate) fn validate(&self, n_qubits: usize) -> Result<()> {
        let t = self.target();
        if t >= n_qubits {
            return Err(Error::QubitOutOfRange { index: t, n_qubits });
        }
        if let Some(c) = self.control() {
            if c >= n_qubits {
                return Err(Error::QubitOutOfRange { index: c, n_qubits });
            }
            if c == t {
                return Err(Error::SameControlTarget(c));
            }
        }
        if let Some(a) = self.angle() {
            if !a.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite angle {a}")));
            }
        }
        Ok(())
    }
}

/// Ordered gate list on a fixed register.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends all gates of `other`, which must act on the same register.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}
