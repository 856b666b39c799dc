//! Ground-state energies by exact diagonalization or a Rotoselect VQE.

mod ed;
mod vqe;

use serde::{Deserialize, Serialize};

pub use ed::{solve_ed, solve_ed_compiled, MAX_ED_QUBITS};
pub use vqe::{rotoselect_sweep, solve_vqe, solve_vqe_compiled, Axis, VqeState};

use crate::error::{Error, Result};
use crate::hamiltonian::QubitHamiltonian;
use crate::simulator::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ed,
    Vqe,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ed" => Ok(Method::Ed),
            "vqe" => Ok(Method::Vqe),
            _ => Err(Error::InvalidArgument(format!("unknown method `{s}`"))),
        }
    }
}

/// Fixed electron count and `2·S_z` (α on even qubits, β on odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sector {
    pub electrons: usize,
    pub twice_sz: i32,
}

impl Sector {
    pub fn contains(&self, basis_index: usize) -> bool {
        let alpha = (basis_index & 0x5555_5555_5555_5555).count_ones() as i32;
        let beta = (basis_index & 0xAAAA_AAAA_AAAA_AAAA).count_ones() as i32;
        (alpha + beta) as usize == self.electrons && alpha - beta == self.twice_sz
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: Method,
    /// Number of rotation+CNOT blocks in the VQE ansatz.
    pub vqe_depth: usize,
    /// Sweep-to-sweep energy change (Hartree) that ends a VQE run.
    pub convergence_threshold: f64,
    pub seed: u64,
    pub sector: Option<Sector>,
    pub max_sweeps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::Ed,
            vqe_depth: 5,
            convergence_threshold: 1e-4,
            seed: 0,
            sector: None,
            max_sweeps: 500,
        }
    }
}

impl SolverConfig {
    pub fn ed() -> Self {
        Self::default()
    }

    pub fn vqe(seed: u64) -> Self {
        Self {
            method: Method::Vqe,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.vqe_depth == 0 {
            return Err(Error::InvalidArgument("vqe_depth must be >= 1".into()));
        }
        if !(self.convergence_threshold > 0.0) {
            return Err(Error::InvalidArgument("convergence_threshold must be > 0".into()));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidArgument("max_sweeps must be >= 1".into()));
        }
        Ok(())
    }

    /// Identifies every setting that can change a returned energy.
    pub fn fingerprint(&self) -> String {
        match self.method {
            Method::Ed => format!("ed:{:?}", self.sector),
            Method::Vqe => format!(
                "vqe:d{}:t{:e}:s{}:m{}",
                self.vqe_depth, self.convergence_threshold, self.seed, self.max_sweeps
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateResult {
    /// Hartree.
    pub energy: f64,
    /// VQE sweeps performed (1 for ED).
    pub iterations: usize,
    pub converged: bool,
    /// Expected particle number of the returned state.
    pub electrons: f64,
    pub state: Option<StateVector>,
}

/// Dispatches on `cfg.method`.
pub fn solve(h: &QubitHamiltonian, cfg: &SolverConfig) -> Result<GroundStateResult> {
    cfg.validate()?;
    match cfg.method {
        Method::Ed => solve_ed(h, cfg.sector),
        Method::Vqe => solve_vqe(h, cfg),
    }
}

/// `⟨N⟩` with qubit `j` occupied when in `|1⟩`.
pub fn particle_number(state: &StateVector) -> f64 {
    state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| i.count_ones() as f64 * a.norm_sqr())
        .sum()
}
