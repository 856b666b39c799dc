//! Fixtures shared by the benchmarks.

use qneb_core::driver::RunConfig;
use qneb_core::hamiltonian::{Geometry, HamiltonianBuilder, OrbitalBasis};
use qneb_core::pathcircuit::{PathSpec, DEFAULT_RREF};
use qneb_core::simulator::{Circuit, CompiledOperator, Gate};

/// Symmetric H₃ near its saddle.
pub fn saddle_operator(orbitals: OrbitalBasis) -> CompiledOperator {
    HamiltonianBuilder::new(orbitals)
        .build(&Geometry::h3(0.94, 0.94).expect("valid geometry"))
        .expect("hamiltonian builds")
        .compile()
}

/// Linear H₃ path from (0.73, 4.0) through (0.73, 0.73) to the mirror.
pub fn h3_path(n_images: usize) -> PathSpec {
    PathSpec::h3_linear([0.73, 4.0], [0.73, 0.73], [4.0, 0.73], n_images, DEFAULT_RREF).expect("valid path")
}

pub fn ed_run(n_images: usize) -> RunConfig {
    RunConfig::new(h3_path(n_images), 2, true)
}

/// `layers` of Ry/Rz columns and CZ chains.
pub fn layered_circuit(n_qubits: usize, layers: usize) -> Circuit {
    let mut c = Circuit::new(n_qubits);
    for l in 0..layers {
        for q in 0..n_qubits {
            let a = 0.1 * (l * n_qubits + q) as f64;
            c.push(Gate::Ry { target: q, angle: a }).expect("in range");
            c.push(Gate::Rz { target: q, angle: 0.5 * a }).expect("in range");
        }
        for q in 0..n_qubits - 1 {
            c.push(Gate::Cz { control: q, target: q + 1 }).expect("in range");
        }
    }
    c
}
