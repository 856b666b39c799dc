//! Outer optimization loop: θ → path → energies → NEB forces → F̄, with
//! central differences on θ and Adam updates.

mod adam;
mod cache;
mod ensemble;

use std::sync::atomic::{AtomicUsize, Ordering};

use log::{debug, info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use adam::{adam_update, AdamParams, AdamState};
pub use cache::{EnergyCache, CACHE_QUANTUM};
pub use ensemble::{perturb_path, run_ensemble, EnsembleResult, EnsembleStat};

use crate::error::{Error, Result};
use crate::groundstate::{solve, SolverConfig};
use crate::hamiltonian::{Geometry, HamiltonianBuilder, OrbitalBasis};
use crate::neb::{self, NebParams, NebReport};
use crate::pathcircuit::{GeneratorConfig, PathGenerator, PathSpec};

/// Electron-count deviation that triggers a warning.
const PARTICLE_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub path: PathSpec,
    /// Initial θ, depth and entangler switch.
    pub generator: GeneratorConfig,
    pub solver: SolverConfig,
    pub orbitals: OrbitalBasis,
    pub neb: NebParams,
    /// Central-difference step on θ.
    pub theta_step: f64,
    pub adam: AdamParams,
    pub max_iterations: usize,
    pub cache_enabled: bool,
    /// Recompute every energy (endpoints and their gradients included) so
    /// solve counts follow the uncached bookkeeping.
    pub count_parity: bool,
    /// Seeds the VQE and, for ensembles, the path perturbation.
    pub seed: u64,
}

impl RunConfig {
    /// ED run from θ = 0 with default parameters.
    pub fn new(path: PathSpec, depth: usize, entanglers: bool) -> Self {
        let generator = GeneratorConfig::zeros(path.n_qubits(), depth, entanglers);
        Self {
            path,
            generator,
            solver: SolverConfig::ed(),
            orbitals: OrbitalBasis::default(),
            neb: NebParams::default(),
            theta_step: 0.001,
            adam: AdamParams::default(),
            max_iterations: 100,
            cache_enabled: true,
            count_parity: false,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.neb.validate()?;
        self.adam.validate()?;
        self.solver.validate()?;
        if !(self.theta_step > 0.0) {
            return Err(Error::InvalidArgument("theta_step must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be >= 1".into()));
        }
        let expected = GeneratorConfig::n_params(self.path.n_qubits(), self.generator.depth);
        if self.generator.theta.len() != expected {
            return Err(Error::ParameterLength {
                expected,
                found: self.generator.theta.len(),
            });
        }
        Ok(())
    }

    fn effective_solver(&self) -> SolverConfig {
        SolverConfig {
            seed: self.seed,
            ..self.solver.clone()
        }
    }
}

/// Solver bookkeeping for one unit of work.
#[derive(Debug, Default)]
struct Counters {
    solves: AtomicUsize,
    unconverged: AtomicUsize,
    particle_warnings: AtomicUsize,
}

/// Ground-state energy of a hydrogen chain given its consecutive spacings.
#[derive(Debug)]
pub struct EnergyModel {
    builder: HamiltonianBuilder,
    solver: SolverConfig,
    fingerprint: String,
    cache: Option<EnergyCache>,
}

impl EnergyModel {
    pub fn new(orbitals: OrbitalBasis, solver: SolverConfig, cached: bool) -> Self {
        let fingerprint = format!("{}:{:?}", solver.fingerprint(), orbitals);
        Self {
            builder: HamiltonianBuilder::new(orbitals),
            solver,
            fingerprint,
            cache: cached.then(EnergyCache::new),
        }
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// Energy without bookkeeping.
    pub fn energy(&self, spacings: &[f64]) -> Result<f64> {
        self.energy_counted(spacings, &Counters::default())
    }

    fn energy_counted(&self, spacings: &[f64], counters: &Counters) -> Result<f64> {
        if let Some(e) = self.cache.as_ref().and_then(|c| c.get(spacings, &self.fingerprint)) {
            return Ok(e);
        }
        let mut positions = Vec::with_capacity(spacings.len() + 1);
        positions.push(0.0);
        for s in spacings {
            positions.push(positions.last().copied().unwrap_or(0.0) + s);
        }
        let geometry = Geometry::hydrogen_chain(&positions)?;
        let h = self.builder.build(&geometry)?;
        let r = solve(&h, &self.solver)?;
        counters.solves.fetch_add(1, Ordering::Relaxed);
        if !r.converged {
            counters.unconverged.fetch_add(1, Ordering::Relaxed);
        }
        if (r.electrons - positions.len() as f64).abs() > PARTICLE_TOLERANCE {
            counters.particle_warnings.fetch_add(1, Ordering::Relaxed);
            warn!(
                "ground state at {spacings:?} has {:.4} electrons, expected {}",
                r.electrons,
                positions.len()
            );
        }
        if let Some(c) = &self.cache {
            c.insert(spacings, &self.fingerprint, r.energy);
        }
        Ok(r.energy)
    }
}

/// One `F̄(θ)` evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub fbar: f64,
    pub report: NebReport,
    pub path: PathSpec,
    /// Reaction coordinates of every row, IS first.
    pub rows: Vec<Vec<f64>>,
    /// Energy of every row, Hartree.
    pub energies: Vec<f64>,
    pub solves: usize,
    pub unconverged: usize,
    pub particle_warnings: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub theta: Vec<f64>,
    pub fbar: f64,
    pub activation_energy: f64,
    pub rows: Vec<Vec<f64>>,
    pub energies: Vec<f64>,
    /// Ground-state solves over the baseline and all θ probes.
    pub solves: usize,
    pub unconverged: usize,
    pub particle_warnings: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrajectory {
    pub records: Vec<IterationRecord>,
    pub final_theta: Vec<f64>,
    /// Evaluation at `final_theta`; absent when the run aborted.
    pub final_evaluation: Option<Evaluation>,
    /// Abort reason, if any. Records up to the failure are kept.
    pub abort: Option<String>,
}

/// Configured run: generator, energy model and cache.
#[derive(Debug)]
pub struct Driver {
    cfg: RunConfig,
    generator: PathGenerator,
    model: EnergyModel,
}

impl Driver {
    pub fn new(cfg: RunConfig) -> Result<Self> {
        cfg.validate()?;
        let generator = PathGenerator::new(cfg.path.clone(), cfg.generator.depth, cfg.generator.entanglers)?;
        let cached = cfg.cache_enabled && !cfg.count_parity;
        let model = EnergyModel::new(cfg.orbitals, cfg.effective_solver(), cached);
        Ok(Self { cfg, generator, model })
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    pub fn model(&self) -> &EnergyModel {
        &self.model
    }

    pub fn n_params(&self) -> usize {
        self.generator.n_params()
    }

    /// Decodes the path at θ, solves every row and assembles the NEB report.
    pub fn evaluate_fbar(&self, theta: &[f64]) -> Result<Evaluation> {
        let path = self.generator.generate(theta).map_err(|e| Error::Decode {
            theta: theta.to_vec(),
            source: Box::new(e),
        })?;
        let rows = path.all_reaction_coordinates();
        let counters = Counters::default();
        let oracle = |r: &[f64]| self.model.energy_counted(r, &counters);
        let energies = rows
            .iter()
            .map(|r| {
                oracle(r).map_err(|e| Error::Probe {
                    geometry: r.clone(),
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let last = rows.len() - 1;
        let mut gradients = Vec::with_capacity(last - 1);
        for (i, r) in rows.iter().enumerate() {
            let endpoint = i == 0 || i == last;
            if endpoint && !self.cfg.count_parity {
                continue;
            }
            let g = neb::numeric_gradient(oracle, r, self.cfg.neb.coord_step)?;
            if !endpoint {
                gradients.push(g);
            }
        }
        let report = neb::assemble(&rows, &energies, &gradients, &self.cfg.neb)?;
        Ok(Evaluation {
            fbar: report.fbar,
            report,
            path,
            rows,
            energies,
            solves: counters.solves.into_inner(),
            unconverged: counters.unconverged.into_inner(),
            particle_warnings: counters.particle_warnings.into_inner(),
        })
    }

    /// `∂F̄/∂θ_k` by central differences, with the probe evaluations.
    pub fn grad_theta_fbar(&self, theta: &[f64]) -> Result<(Vec<f64>, Vec<Evaluation>)> {
        let d = self.cfg.theta_step;
        let probes: Vec<Vec<f64>> = (0..theta.len())
            .flat_map(|k| {
                [d, -d].map(|s| {
                    let mut t = theta.to_vec();
                    t[k] += s;
                    t
                })
            })
            .collect();
        let evals = probes
            .par_iter()
            .map(|t| self.evaluate_fbar(t))
            .collect::<Result<Vec<_>>>()?;
        let grad = evals
            .chunks(2)
            .map(|pair| (pair[0].fbar - pair[1].fbar) / (2.0 * d))
            .collect();
        Ok((grad, evals))
    }

    pub fn optimize(&self) -> RunTrajectory {
        self.optimize_with(|_| {})
    }

    /// Runs exactly `max_iterations` Adam steps, calling `on_record` after
    /// each. A failed evaluation stops the run; the trajectory so far is
    /// returned with the reason.
    pub fn optimize_with(&self, mut on_record: impl FnMut(&IterationRecord)) -> RunTrajectory {
        let mut theta = self.cfg.generator.theta.clone();
        let mut state = AdamState::new(theta.len());
        let mut records = Vec::with_capacity(self.cfg.max_iterations);
        for iteration in 0..self.cfg.max_iterations {
            let step = self.evaluate_fbar(&theta).and_then(|base| {
                let (grad, probes) = self.grad_theta_fbar(&theta)?;
                Ok((base, grad, probes))
            });
            let (base, grad, probes) = match step {
                Ok(v) => v,
                Err(e) => return self.aborted(records, theta, iteration, e),
            };
            let sum = |f: fn(&Evaluation) -> usize| f(&base) + probes.iter().map(f).sum::<usize>();
            let record = IterationRecord {
                iteration,
                theta: theta.clone(),
                fbar: base.fbar,
                activation_energy: base.report.activation_energy,
                rows: base.rows.clone(),
                energies: base.energies.clone(),
                solves: sum(|e| e.solves),
                unconverged: sum(|e| e.unconverged),
                particle_warnings: sum(|e| e.particle_warnings),
            };
            debug!(
                "iteration {iteration}: fbar {:.6} Ea {:.6} solves {}",
                record.fbar, record.activation_energy, record.solves
            );
            on_record(&record);
            records.push(record);
            if let Err(e) = adam_update(&mut theta, &grad, &mut state, &self.cfg.adam) {
                return self.aborted(records, theta, iteration, e);
            }
        }
        match self.evaluate_fbar(&theta) {
            Ok(ev) => {
                info!("final fbar {:.6} Ea {:.6}", ev.fbar, ev.report.activation_energy);
                RunTrajectory {
                    records,
                    final_theta: theta,
                    final_evaluation: Some(ev),
                    abort: None,
                }
            }
            Err(e) => self.aborted(records, theta, self.cfg.max_iterations, e),
        }
    }

    fn aborted(&self, records: Vec<IterationRecord>, theta: Vec<f64>, iteration: usize, e: Error) -> RunTrajectory {
        warn!("run aborted at iteration {iteration}: {e}");
        RunTrajectory {
            records,
            final_theta: theta,
            final_evaluation: None,
            abort: Some(format!("iteration {iteration}: {e}")),
        }
    }
}

pub fn evaluate_fbar(theta: &[f64], cfg: &RunConfig) -> Result<Evaluation> {
    Driver::new(cfg.clone())?.evaluate_fbar(theta)
}

pub fn grad_theta_fbar(theta: &[f64], cfg: &RunConfig) -> Result<Vec<f64>> {
    Ok(Driver::new(cfg.clone())?.grad_theta_fbar(theta)?.0)
}

pub fn optimize(cfg: &RunConfig) -> Result<RunTrajectory> {
    Ok(Driver::new(cfg.clone())?.optimize())
}

/// Ground-state solves per iteration without caching:
/// `(2P + 1)·(N_image + 2)·(1 + 2C)`.
pub fn count_parity_solves(n_images: usize, n_params: usize, coords_per_row: usize) -> usize {
    (2 * n_params + 1) * (n_images + 2) * (1 + 2 * coords_per_row)
}

/// Symmetric saddle of a linear H₃ surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddlePoint {
    /// `R_AB = R_BC`, Å.
    pub r: f64,
    pub energy: f64,
    pub is_energy: f64,
    /// `energy − is_energy`, Hartree.
    pub barrier: f64,
}

/// Minimum of `E(r, r)` on `[lo, hi]`: a scan at `step`, then golden-section
/// refinement of the best bracket to `1e-6` Å.
pub fn locate_saddle(model: &EnergyModel, is: [f64; 2], lo: f64, hi: f64, step: f64) -> Result<SaddlePoint> {
    if !(lo > 0.0 && hi > lo && step > 0.0) {
        return Err(Error::InvalidArgument(format!("bad saddle scan range [{lo}, {hi}] step {step}")));
    }
    let n = ((hi - lo) / step).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|k| lo + k as f64 * step).collect();
    let e: Vec<f64> = grid.iter().map(|&r| model.energy(&[r, r])).collect::<Result<_>>()?;
    let k = e
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .expect("non-empty grid");
    let (mut a, mut b) = (grid[k.saturating_sub(1)], grid[(k + 1).min(n)]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let f = |r: f64| model.energy(&[r, r]);
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > 1e-6 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    let r = 0.5 * (a + b);
    let energy = f(r)?;
    let is_energy = model.energy(&is)?;
    Ok(SaddlePoint {
        r,
        energy,
        is_energy,
        barrier: energy - is_energy,
    })
}
