//! Command implementations. Each writes its artifacts under `out` and
//! returns the in-memory result.

use std::path::Path;

use log::info;
use qneb_core::driver::{locate_saddle, run_ensemble, Driver, EnergyModel, EnsembleResult, SaddlePoint};
use qneb_core::groundstate::{solve_ed, solve_vqe, Method, SolverConfig};
use qneb_core::hamiltonian::{load_hamiltonian, save_hamiltonian, Geometry, HamiltonianBuilder, OrbitalBasis};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output;

/// Diagonal range searched for the symmetric saddle, Å.
const SADDLE_RANGE: (f64, f64, f64) = (0.5, 1.5, 0.01);

fn ed_model() -> EnergyModel {
    EnergyModel::new(OrbitalBasis::Lowdin, SolverConfig::ed(), false)
}

fn prepare_out(out: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::Config(format!("cannot create {}: {e}", out.display())))
}

/// Exact symmetric saddle relative to `is`.
pub fn saddle_reference(is: [f64; 2]) -> Result<SaddlePoint, CliError> {
    let (lo, hi, step) = SADDLE_RANGE;
    Ok(locate_saddle(&ed_model(), is, lo, hi, step)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub preset: Option<String>,
    pub method: Method,
    pub n_images: usize,
    pub seed: u64,
    pub iterations: usize,
    pub fbar_initial: f64,
    /// Values at the final θ.
    pub fbar: f64,
    pub r_ab: f64,
    pub r_bc: f64,
    pub activation_energy: f64,
    pub saddle_r: Option<f64>,
    pub saddle_barrier: Option<f64>,
    pub delta_saddle: Option<f64>,
    pub solves_first_iteration: usize,
    pub total_solves: usize,
    pub unconverged_solves: usize,
    pub particle_warnings: usize,
    pub final_rows: Vec<Vec<f64>>,
    pub aborted: Option<String>,
}

/// Full optimization: `iterations.csv`, `summary.json`, `final_path.txt`.
/// A run that aborts still writes the iterations it finished.
pub fn run(cfg: &ExperimentConfig, out: &Path) -> Result<RunSummary, CliError> {
    let rc = cfg.run_config()?;
    prepare_out(out)?;
    let driver = Driver::new(rc.clone()).map_err(|e| CliError::Config(e.to_string()))?;
    let traj = driver.optimize_with(|r| {
        info!(
            "iteration {:>3}  fbar {:.6}  Ea {:.6}  solves {}",
            r.iteration, r.fbar, r.activation_energy, r.solves
        );
    });
    output::write_iterations(&out.join("iterations.csv"), &traj.records)?;

    let is = rc.path.reaction_coordinates(0);
    let saddle = if is.len() == 2 {
        Some(saddle_reference([is[0], is[1]])?)
    } else {
        None
    };
    let fin = traj.final_evaluation.as_ref();
    let (fbar, rows, ea, highest) = match fin {
        Some(ev) => (
            ev.fbar,
            ev.rows.clone(),
            ev.report.activation_energy,
            ev.report.images[ev.report.highest_image].r.clone(),
        ),
        None => (f64::NAN, Vec::new(), f64::NAN, vec![f64::NAN; 2]),
    };
    if let Some(ev) = fin {
        std::fs::write(out.join("final_path.txt"), ev.path.to_text())?;
    }
    let summary = RunSummary {
        preset: cfg.preset.clone(),
        method: cfg.solver.method,
        n_images: rc.path.n_images(),
        seed: cfg.run.seed,
        iterations: traj.records.len(),
        fbar_initial: traj.records.first().map_or(f64::NAN, |r| r.fbar),
        fbar,
        r_ab: highest[0],
        r_bc: highest.get(1).copied().unwrap_or(f64::NAN),
        activation_energy: ea,
        saddle_r: saddle.map(|s| s.r),
        saddle_barrier: saddle.map(|s| s.barrier),
        delta_saddle: saddle.map(|s| (ea - s.barrier).abs()),
        solves_first_iteration: traj.records.first().map_or(0, |r| r.solves),
        total_solves: traj.records.iter().map(|r| r.solves).sum(),
        unconverged_solves: traj.records.iter().map(|r| r.unconverged).sum(),
        particle_warnings: traj.records.iter().map(|r| r.particle_warnings).sum(),
        final_rows: rows,
        aborted: traj.abort.clone(),
    };
    output::write_json(&out.join("summary.json"), &summary)?;
    match &traj.abort {
        Some(reason) => Err(CliError::Runtime(reason.clone())),
        None => Ok(summary),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PesScan {
    /// `(R_AB, R_BC, E)`, row-major.
    pub grid: Vec<(f64, f64, f64)>,
    pub saddle: SaddlePoint,
}

/// ED energies on the `[r_min, r_max]²` grid plus the refined diagonal
/// saddle: `pes.csv` and `saddle.json`.
pub fn scan_pes(cfg: &ExperimentConfig, out: &Path) -> Result<PesScan, CliError> {
    prepare_out(out)?;
    let s = &cfg.scan;
    let n = ((s.r_max - s.r_min) / s.step + 1e-9).floor() as usize;
    let axis: Vec<f64> = (0..=n).map(|k| s.r_min + k as f64 * s.step).collect();
    let points: Vec<(f64, f64)> = axis.iter().flat_map(|&a| axis.iter().map(move |&b| (a, b))).collect();
    let model = ed_model();
    let grid = points
        .par_iter()
        .map(|&(a, b)| Ok((a, b, model.energy(&[a, b])?)))
        .collect::<Result<Vec<_>, qneb_core::Error>>()?;
    output::write_pes(&out.join("pes.csv"), &grid)?;
    let saddle = saddle_reference(cfg.path.is)?;
    output::write_json(&out.join("saddle.json"), &saddle)?;
    Ok(PesScan { grid, saddle })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VqeRun {
    pub seed: u64,
    pub energy: f64,
    pub gap: f64,
    pub sweeps: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SinglePoint {
    pub positions: Vec<f64>,
    pub ed_energy: f64,
    pub orbitals: OrbitalBasis,
    pub threshold: f64,
    pub vqe: Vec<VqeRun>,
}

/// ED energy and, for each seed, the VQE energy and its gap to ED.
pub fn single_point(
    positions: &[f64],
    solver: &SolverConfig,
    orbitals: OrbitalBasis,
    seeds: &[u64],
) -> Result<SinglePoint, CliError> {
    let geometry = Geometry::hydrogen_chain(positions).map_err(|e| CliError::Config(e.to_string()))?;
    let h = HamiltonianBuilder::new(orbitals).build(&geometry)?;
    let ed = solve_ed(&h, None)?.energy;
    let vqe = seeds
        .par_iter()
        .map(|&seed| {
            let r = solve_vqe(&h, &SolverConfig { seed, ..solver.clone() })?;
            Ok(VqeRun {
                seed,
                energy: r.energy,
                gap: r.energy - ed,
                sweeps: r.iterations,
                converged: r.converged,
            })
        })
        .collect::<Result<Vec<_>, qneb_core::Error>>()?;
    Ok(SinglePoint {
        positions: positions.to_vec(),
        ed_energy: ed,
        orbitals,
        threshold: solver.convergence_threshold,
        vqe,
    })
}

/// Paired CZ / no-CZ runs from perturbed paths (ED only): `ensemble.csv`,
/// `ensemble_runs.csv`.
pub fn ensemble(cfg: &ExperimentConfig, out: &Path) -> Result<EnsembleResult, CliError> {
    if cfg.solver.method != Method::Ed {
        return Err(CliError::Config("solver.method: ensembles use the ed solver".into()));
    }
    let base = cfg.run_config()?;
    prepare_out(out)?;
    let seeds = cfg.seeds();
    info!(
        "ensemble: {} seeds x 2 arms, {} images, {} iterations",
        seeds.len(),
        base.path.n_images(),
        base.max_iterations
    );
    let result = run_ensemble(&base, &seeds, cfg.ensemble.perturbation)?;
    output::write_ensemble(out, &result)?;
    if let Some((seed, cz, reason)) = result.aborts.first() {
        log::warn!("{} aborted run(s); first: seed {seed} cz={cz}: {reason}", result.aborts.len());
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HamSummary {
    pub n_qubits: usize,
    pub n_terms: usize,
    pub ed_energy: Option<f64>,
}

pub fn ham_export(positions: &[f64], orbitals: OrbitalBasis, file: &Path) -> Result<HamSummary, CliError> {
    let geometry = Geometry::hydrogen_chain(positions).map_err(|e| CliError::Config(e.to_string()))?;
    let h = HamiltonianBuilder::new(orbitals).build(&geometry)?;
    save_hamiltonian(&h, file)?;
    Ok(HamSummary {
        n_qubits: h.n_qubits(),
        n_terms: h.observable().terms().len(),
        ed_energy: solve_ed(&h, None).ok().map(|r| r.energy),
    })
}

pub fn ham_import(file: &Path) -> Result<HamSummary, CliError> {
    let h = load_hamiltonian(file).map_err(|e| CliError::Config(format!("{}: {e}", file.display())))?;
    Ok(HamSummary {
        n_qubits: h.n_qubits(),
        n_terms: h.observable().terms().len(),
        ed_energy: solve_ed(&h, None).ok().map(|r| r.energy),
    })
}
