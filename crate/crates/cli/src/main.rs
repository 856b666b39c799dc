use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qneb_cli::commands;
use qneb_cli::presets;
use qneb_cli::{CliError, ExperimentConfig};
use qneb_core::groundstate::SolverConfig;
use qneb_core::hamiltonian::OrbitalBasis;

#[derive(Parser)]
#[command(name = "qneb", version, about = "Reaction path optimization with circuit-generated NEB paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// TOML experiment file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named preset; keys from --config override it
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory
    #[arg(long, env = "QNEB_OUT", default_value = "qneb-out")]
    out: PathBuf,
    /// Disable caching so solve counts follow the uncached bookkeeping
    #[arg(long)]
    count_parity: bool,
    /// Override optimizer.max_iterations
    #[arg(long)]
    iterations: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize a reaction path
    Run(Common),
    /// ED energies on an (R_AB, R_BC) grid and the diagonal saddle
    ScanPes {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r_min: Option<f64>,
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// ED and VQE energies of one H3 geometry
    SinglePoint {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r_ab: f64,
        #[arg(long)]
        r_bc: f64,
        /// VQE stopping threshold, Hartree
        #[arg(long)]
        threshold: Option<f64>,
        /// Number of VQE seeds, starting at --seed
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        /// Orbital basis for the VQE (default core-hamiltonian)
        #[arg(long)]
        orbitals: Option<OrbitalBasis>,
    },
    /// Paired CZ / no-CZ runs from perturbed initial paths
    Ensemble {
        #[command(flatten)]
        common: Common,
        /// Override ensemble.n_paths
        #[arg(long)]
        paths: Option<usize>,
    },
    /// Hamiltonian file import and export
    Ham {
        #[command(subcommand)]
        action: HamAction,
    },
    /// List presets or print one as TOML
    Presets { name: Option<String> },
}

#[derive(Subcommand)]
enum HamAction {
    /// Build the H3 Hamiltonian at a geometry and write it
    Export {
        #[arg(long)]
        r_ab: f64,
        #[arg(long)]
        r_bc: f64,
        #[arg(long, default_value = "lowdin")]
        orbitals: OrbitalBasis,
        #[arg(long)]
        file: PathBuf,
    },
    /// Read a Hamiltonian file and diagonalize it
    Import {
        #[arg(long)]
        file: PathBuf,
    },
}

fn load_config(c: &Common) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match (&c.config, &c.preset) {
        (Some(path), preset) => {
            let mut text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            if let Some(p) = preset {
                text = format!("preset = {p:?}\n{text}");
            }
            ExperimentConfig::from_toml(&text)?
        }
        (None, Some(p)) => presets::preset(p)?,
        (None, None) => ExperimentConfig::default(),
    };
    if let Some(s) = c.seed {
        cfg.run.seed = s;
    }
    if c.count_parity {
        cfg.run.count_parity = true;
    }
    if let Some(n) = c.iterations {
        cfg.optimizer.max_iterations = n;
    }
    cfg.validate()?;
    if let Some(n) = c.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    Ok(cfg)
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<(), CliError> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(c) => {
            let cfg = load_config(&c)?;
            std::fs::create_dir_all(&c.out)?;
            std::fs::write(c.out.join("config.toml"), cfg.to_toml())?;
            let s = commands::run(&cfg, &c.out)?;
            println!(
                "fbar {:.4} Ha/A  highest image ({:.3}, {:.3}) A  Ea {:.1} mHa  |delta_saddle| {}",
                s.fbar,
                s.r_ab,
                s.r_bc,
                1e3 * s.activation_energy,
                s.delta_saddle.map_or("n/a".into(), |d| format!("{:.1} mHa", 1e3 * d)),
            );
        }
        Command::ScanPes { common, r_min, r_max, step } => {
            let mut cfg = load_config(&common)?;
            cfg.scan.r_min = r_min.unwrap_or(cfg.scan.r_min);
            cfg.scan.r_max = r_max.unwrap_or(cfg.scan.r_max);
            cfg.scan.step = step.unwrap_or(cfg.scan.step);
            cfg.validate()?;
            let scan = commands::scan_pes(&cfg, &common.out)?;
            println!(
                "{} grid points; saddle R_AB = R_BC = {:.4} A, barrier {:.2} mHa",
                scan.grid.len(),
                scan.saddle.r,
                1e3 * scan.saddle.barrier
            );
        }
        Command::SinglePoint { common, r_ab, r_bc, threshold, seeds, orbitals } => {
            let cfg = load_config(&common)?;
            let mut solver = SolverConfig::vqe(cfg.run.seed);
            solver.vqe_depth = cfg.solver.vqe_depth;
            solver.max_sweeps = cfg.solver.max_sweeps;
            solver.convergence_threshold = threshold.unwrap_or(cfg.solver.convergence_threshold);
            solver
                .validate()
                .map_err(|e| CliError::Config(format!("--threshold: {e}")))?;
            let seed_list: Vec<u64> = (cfg.run.seed..cfg.run.seed + seeds).collect();
            let r = commands::single_point(
                &[0.0, r_ab, r_ab + r_bc],
                &solver,
                orbitals.unwrap_or(OrbitalBasis::CoreHamiltonian),
                &seed_list,
            )?;
            print_json(&r)?;
        }
        Command::Ensemble { common, paths } => {
            let mut cfg = load_config(&common)?;
            if let Some(n) = paths {
                cfg.ensemble.n_paths = n;
                cfg.ensemble.seeds = None;
            }
            let r = commands::ensemble(&cfg, &common.out)?;
            if let Some(s) = r.stats.last() {
                println!(
                    "iteration {}: cz {:.4} +- {:.4}, none {:.4} +- {:.4}, delta {:.4} +- {:.4} Ha/A",
                    s.iteration, s.cz_mean, s.cz_std, s.none_mean, s.none_std, s.delta_mean, s.delta_std
                );
            }
            if !r.aborts.is_empty() {
                return Err(CliError::Runtime(format!("{} ensemble run(s) aborted", r.aborts.len())));
            }
        }
        Command::Ham { action } => match action {
            HamAction::Export { r_ab, r_bc, orbitals, file } => {
                print_json(&commands::ham_export(&[0.0, r_ab, r_ab + r_bc], orbitals, &file)?)?
            }
            HamAction::Import { file } => print_json(&commands::ham_import(&file)?)?,
        },
        Command::Presets { name } => match name {
            Some(n) => print!("{}", presets::preset(&n)?.to_toml()),
            None => presets::PRESETS.iter().for_each(|p| println!("{p}")),
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qneb: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
