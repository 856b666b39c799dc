//! Experiment configuration: typed TOML sections layered over a preset.

use std::path::{Path, PathBuf};

use qneb_core::driver::{AdamParams, RunConfig};
use qneb_core::groundstate::{Method, SolverConfig};
use qneb_core::hamiltonian::OrbitalBasis;
use qneb_core::neb::NebParams;
use qneb_core::pathcircuit::{GeneratorConfig, PathSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::presets;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSection {
    pub n_images: usize,
    /// `(R_AB, R_BC)` in Å.
    pub is: [f64; 2],
    pub imp: [f64; 2],
    pub fs: [f64; 2],
    pub rref: f64,
    /// Path file overriding the interpolated H₃ path.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSection {
    pub depth: usize,
    pub entanglers: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub method: Method,
    pub orbitals: OrbitalBasis,
    pub vqe_depth: usize,
    pub convergence_threshold: f64,
    pub max_sweeps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NebSection {
    pub spring_constant: f64,
    pub coord_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSection {
    pub theta_step: f64,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub max_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub seed: u64,
    pub cache: bool,
    pub count_parity: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    pub n_paths: usize,
    /// Half-width of the uniform spacing perturbation, Å.
    pub perturbation: f64,
    /// Explicit seeds; `0..n_paths` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub r_min: f64,
    pub r_max: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub path: PathSection,
    pub generator: GeneratorSection,
    pub solver: SolverSection,
    pub neb: NebSection,
    pub optimizer: OptimizerSection,
    pub run: RunSection,
    pub ensemble: EnsembleSection,
    pub scan: ScanSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        presets::base()
    }
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

impl ExperimentConfig {
    /// Parses TOML text. A top-level `preset` key selects the starting
    /// values; every other key overrides them.
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let user: toml::Table = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let base = match user.get("preset") {
            Some(toml::Value::String(name)) => presets::preset(name)?,
            Some(_) => return Err(CliError::Config("`preset` must be a string".into())),
            None => Self::default(),
        };
        let mut table = toml::Table::try_from(&base).map_err(|e| CliError::Config(e.to_string()))?;
        merge(&mut table, user);
        let cfg: Self = table.try_into().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let check = |ok: bool, key: &str, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(CliError::Config(format!("{key}: {msg}")))
            }
        };
        check(self.path.n_images >= 1, "path.n_images", "must be >= 1")?;
        check(self.path.rref > 0.0, "path.rref", "must be positive")?;
        check(self.generator.depth >= 1, "generator.depth", "must be >= 1")?;
        check(self.solver.vqe_depth >= 1, "solver.vqe_depth", "must be >= 1")?;
        check(self.solver.convergence_threshold > 0.0, "solver.convergence_threshold", "must be positive")?;
        check(self.solver.max_sweeps >= 1, "solver.max_sweeps", "must be >= 1")?;
        check(self.neb.spring_constant > 0.0, "neb.spring_constant", "must be positive")?;
        check(self.neb.coord_step > 0.0, "neb.coord_step", "must be positive")?;
        check(self.optimizer.theta_step > 0.0, "optimizer.theta_step", "must be positive")?;
        check(self.optimizer.learning_rate > 0.0, "optimizer.learning_rate", "must be positive")?;
        check((0.0..1.0).contains(&self.optimizer.beta1), "optimizer.beta1", "must be in [0, 1)")?;
        check((0.0..1.0).contains(&self.optimizer.beta2), "optimizer.beta2", "must be in [0, 1)")?;
        check(self.optimizer.epsilon > 0.0, "optimizer.epsilon", "must be positive")?;
        check(self.optimizer.max_iterations >= 1, "optimizer.max_iterations", "must be >= 1")?;
        check(self.ensemble.perturbation >= 0.0, "ensemble.perturbation", "must be >= 0")?;
        check(
            self.scan.step > 0.0 && self.scan.r_min > 0.0 && self.scan.r_max >= self.scan.r_min && self.scan.r_max < self.path.rref,
            "scan",
            "need 0 < r_min <= r_max < path.rref and step > 0",
        )?;
        Ok(())
    }

    pub fn path_spec(&self) -> Result<PathSpec, CliError> {
        let p = match &self.path.file {
            Some(f) => PathSpec::load(f),
            None => PathSpec::h3_linear(self.path.is, self.path.imp, self.path.fs, self.path.n_images, self.path.rref),
        };
        p.map_err(|e| CliError::Config(format!("path: {e}")))
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            method: self.solver.method,
            vqe_depth: self.solver.vqe_depth,
            convergence_threshold: self.solver.convergence_threshold,
            seed: self.run.seed,
            sector: None,
            max_sweeps: self.solver.max_sweeps,
        }
    }

    pub fn seeds(&self) -> Vec<u64> {
        self.ensemble
            .seeds
            .clone()
            .unwrap_or_else(|| (0..self.ensemble.n_paths as u64).collect())
    }

    pub fn run_config(&self) -> Result<RunConfig, CliError> {
        let path = self.path_spec()?;
        let generator = GeneratorConfig::zeros(path.n_qubits(), self.generator.depth, self.generator.entanglers);
        let cfg = RunConfig {
            path,
            generator,
            solver: self.solver_config(),
            orbitals: self.solver.orbitals,
            neb: NebParams {
                spring_constant: self.neb.spring_constant,
                coord_step: self.neb.coord_step,
            },
            theta_step: self.optimizer.theta_step,
            adam: AdamParams {
                learning_rate: self.optimizer.learning_rate,
                beta1: self.optimizer.beta1,
                beta2: self.optimizer.beta2,
                epsilon: self.optimizer.epsilon,
            },
            max_iterations: self.optimizer.max_iterations,
            cache_enabled: self.run.cache,
            count_parity: self.run.count_parity,
            seed: self.run.seed,
        };
        cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }
}
