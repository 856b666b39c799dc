//! Minimal-basis hydrogen-chain Hamiltonians.
//!
//! Geometry (Å) → STO-3G integrals (bohr, Hartree) → orthonormal orbitals →
//! interleaved spin orbitals → Jordan–Wigner Pauli sum.

mod basis;
mod boys;
mod fermion;
mod integrals;
mod io;
mod orbitals;

use serde::{Deserialize, Serialize};

pub use basis::{ContractedGaussian, ShellData};
pub use boys::boys_f0;
pub use fermion::{to_qubit_hamiltonian, SpinOrbitalHamiltonian, DROP_TOLERANCE};
pub use integrals::{compute_integrals, compute_integrals_with, IntegralSet};
pub use io::{load_hamiltonian, parse_hamiltonian, save_hamiltonian, write_hamiltonian};
pub use orbitals::{core_hamiltonian_basis, in_basis, orthogonalize, transform, OrbitalBasis};

use crate::error::{Error, Result};
use crate::simulator::{CompiledOperator, Observable};

/// Minimum separation (Å) between two atoms.
pub const MIN_SEPARATION: f64 = 1e-6;

/// Atoms on a line. Positions in Å.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    positions: Vec<f64>,
    charges: Vec<f64>,
}

impl Geometry {
    pub fn new(positions: Vec<f64>, charges: Vec<f64>) -> Result<Self> {
        if positions.len() != charges.len() {
            return Err(Error::InvalidArgument(format!(
                "{} positions but {} charges",
                positions.len(),
                charges.len()
            )));
        }
        let g = Self { positions, charges };
        g.validate()?;
        Ok(g)
    }

    pub fn hydrogen_chain(positions: &[f64]) -> Result<Self> {
        Self::new(positions.to_vec(), vec![1.0; positions.len()])
    }

    /// Linear H₃ with H_A at the origin.
    pub fn h3(r_ab: f64, r_bc: f64) -> Result<Self> {
        Self::hydrogen_chain(&[0.0, r_ab, r_ab + r_bc])
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn charges(&self) -> &[f64] {
        &self.charges
    }

    pub fn n_atoms(&self) -> usize {
        self.positions.len()
    }

    pub fn translated(&self, shift: f64) -> Self {
        Self {
            positions: self.positions.iter().map(|x| x + shift).collect(),
            charges: self.charges.clone(),
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.positions.is_empty() {
            return Err(Error::InvalidArgument("geometry has no atoms".into()));
        }
        if let Some(x) = self.positions.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite coordinate {x}")));
        }
        for i in 0..self.positions.len() {
            for j in 0..i {
                if (self.positions[i] - self.positions[j]).abs() <= MIN_SEPARATION {
                    return Err(Error::CoincidentAtoms(j, i));
                }
            }
        }
        Ok(())
    }
}

/// Pauli-sum Hamiltonian, one qubit per spin orbital.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitHamiltonian {
    observable: Observable,
}

impl QubitHamiltonian {
    pub fn new(observable: Observable) -> Self {
        Self { observable }
    }

    pub fn n_qubits(&self) -> usize {
        self.observable.n_qubits()
    }

    pub fn observable(&self) -> &Observable {
        &self.observable
    }

    pub fn compile(&self) -> CompiledOperator {
        self.observable.compile()
    }
}

/// Builds hydrogen-chain Hamiltonians from a basis shell and orbital choice.
#[derive(Debug, Clone)]
pub struct HamiltonianBuilder {
    shell: ShellData,
    orbitals: OrbitalBasis,
}

impl Default for HamiltonianBuilder {
    fn default() -> Self {
        Self::new(OrbitalBasis::default())
    }
}

impl HamiltonianBuilder {
    pub fn new(orbitals: OrbitalBasis) -> Self {
        Self {
            shell: ShellData::sto3g_hydrogen(),
            orbitals,
        }
    }

    pub fn with_shell(mut self, shell: ShellData) -> Self {
        self.shell = shell;
        self
    }

    pub fn orbitals(&self) -> OrbitalBasis {
        self.orbitals
    }

    pub fn integrals(&self, geometry: &Geometry) -> Result<IntegralSet> {
        in_basis(&compute_integrals_with(geometry, &self.shell)?, self.orbitals)
    }

    pub fn build(&self, geometry: &Geometry) -> Result<QubitHamiltonian> {
        to_qubit_hamiltonian(&self.integrals(geometry)?)
    }
}
