//! Named experiment presets.

use qneb_core::groundstate::Method;
use qneb_core::hamiltonian::OrbitalBasis;

use crate::config::*;
use crate::error::CliError;

pub const PRESETS: [&str; 7] = [
    "table1-n3-ed",
    "table1-n3-vqe",
    "table1-n5-ed",
    "table1-n5-vqe",
    "appendix-n3",
    "appendix-n5",
    "appendix-n7",
];

/// Initial state `(R_AB, R_BC)`, Å. The final state is its mirror.
pub const DEFAULT_IS: [f64; 2] = [0.73, 4.0];
/// Intermediate point of the initial path, Å.
pub const DEFAULT_IMP: [f64; 2] = [0.73, 0.73];

/// Three-image ED run; every other preset starts from this.
pub fn base() -> ExperimentConfig {
    ExperimentConfig {
        preset: None,
        path: PathSection {
            n_images: 3,
            is: DEFAULT_IS,
            imp: DEFAULT_IMP,
            fs: [DEFAULT_IS[1], DEFAULT_IS[0]],
            rref: 6.0,
            file: None,
        },
        generator: GeneratorSection {
            depth: 2,
            entanglers: true,
        },
        solver: SolverSection {
            method: Method::Ed,
            orbitals: OrbitalBasis::Lowdin,
            vqe_depth: 5,
            convergence_threshold: 1e-4,
            max_sweeps: 500,
        },
        neb: NebSection {
            spring_constant: 0.1,
            coord_step: 0.1,
        },
        optimizer: OptimizerSection {
            theta_step: 0.001,
            learning_rate: 0.01,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            max_iterations: 100,
        },
        run: RunSection {
            seed: 0,
            cache: true,
            count_parity: false,
        },
        ensemble: EnsembleSection {
            n_paths: 10,
            perturbation: 0.1,
            seeds: None,
        },
        scan: ScanSection {
            r_min: 0.5,
            r_max: 3.0,
            step: 0.05,
        },
    }
}

pub fn preset(name: &str) -> Result<ExperimentConfig, CliError> {
    let mut cfg = base();
    let (n_images, vqe) = match name {
        "table1-n3-ed" | "appendix-n3" => (3, false),
        "table1-n5-ed" | "appendix-n5" => (5, false),
        "appendix-n7" => (7, false),
        "table1-n3-vqe" => (3, true),
        "table1-n5-vqe" => (5, true),
        _ => {
            return Err(CliError::Config(format!(
                "unknown preset `{name}` (known: {})",
                PRESETS.join(", ")
            )))
        }
    };
    cfg.preset = Some(name.to_string());
    cfg.path.n_images = n_images;
    if vqe {
        cfg.solver.method = Method::Vqe;
        // Rotoselect from a near-identity start needs the orbitals to
        // diagonalize the one-body part; the ED energy is unaffected
        cfg.solver.orbitals = OrbitalBasis::CoreHamiltonian;
    }
    Ok(cfg)
}
