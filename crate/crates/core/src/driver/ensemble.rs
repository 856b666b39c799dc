//! Paired runs with and without the CZ chain from randomly perturbed paths.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Driver, RunConfig};
use crate::error::{Error, Result};
use crate::pathcircuit::{GeneratorConfig, PathRow, PathSpec};

/// Adds `U[−amplitude, amplitude)` to every spacing of every image row of a
/// linear path, drawn in row order. Endpoints are untouched.
pub fn perturb_path(path: &PathSpec, amplitude: f64, rng: &mut impl Rng) -> Result<PathSpec> {
    if path.ndim() != 1 {
        return Err(Error::InvalidArgument("perturbation needs a linear (ndim = 1) path".into()));
    }
    let last = path.rows().len() - 1;
    let rows = path
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            if i == 0 || i == last {
                return row.clone();
            }
            let mut coords = vec![row.coords[0]];
            for w in row.coords.windows(2) {
                let d = w[1] - w[0] + rng.random_range(-amplitude..amplitude);
                coords.push(coords.last().copied().unwrap_or(0.0) + d);
            }
            PathRow {
                role: row.role,
                coords,
                fixed: row.fixed.clone(),
            }
        })
        .collect();
    PathSpec::new(rows, path.rref(), 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStat {
    pub iteration: usize,
    pub runs: usize,
    pub cz_mean: f64,
    pub cz_std: f64,
    pub none_mean: f64,
    pub none_std: f64,
    /// Mean over seeds of `F̄_none − F̄_cz`.
    pub delta_mean: f64,
    pub delta_std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub seeds: Vec<u64>,
    /// `F̄` per iteration for each seed, CZ arm.
    pub cz: Vec<Vec<f64>>,
    /// Same, no-entangler arm.
    pub none: Vec<Vec<f64>>,
    /// Aborted runs as `(seed, with_cz, reason)`.
    pub aborts: Vec<(u64, bool, String)>,
    pub stats: Vec<EnsembleStat>,
}

fn mean_std(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let s = if x.len() > 1 {
        (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (m, s)
}

/// For each seed: perturb `base.path`, then optimize from the same path with
/// and without entanglers. Statistics at an iteration use seeds whose two
/// arms both reached it.
pub fn run_ensemble(base: &RunConfig, seeds: &[u64], amplitude: f64) -> Result<EnsembleResult> {
    base.validate()?;
    if !(amplitude >= 0.0) {
        return Err(Error::InvalidArgument(format!("perturbation amplitude must be >= 0, got {amplitude}")));
    }
    let mut configs = Vec::with_capacity(2 * seeds.len());
    for &seed in seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let path = perturb_path(&base.path, amplitude, &mut rng)?;
        for entanglers in [true, false] {
            let mut cfg = base.clone();
            cfg.seed = seed;
            cfg.path = path.clone();
            cfg.generator = GeneratorConfig {
                entanglers,
                ..base.generator.clone()
            };
            configs.push(cfg);
        }
    }
    let runs = configs
        .into_par_iter()
        .map(|cfg| Ok(Driver::new(cfg)?.optimize()))
        .collect::<Result<Vec<_>>>()?;

    let mut cz = Vec::new();
    let mut none = Vec::new();
    let mut aborts = Vec::new();
    for (pair, &seed) in runs.chunks(2).zip(seeds) {
        for (run, with_cz) in pair.iter().zip([true, false]) {
            if let Some(reason) = &run.abort {
                aborts.push((seed, with_cz, reason.clone()));
            }
        }
        cz.push(pair[0].records.iter().map(|r| r.fbar).collect::<Vec<_>>());
        none.push(pair[1].records.iter().map(|r| r.fbar).collect::<Vec<_>>());
    }

    let stats = (0..base.max_iterations)
        .filter_map(|it| {
            let (a, b): (Vec<f64>, Vec<f64>) = cz
                .iter()
                .zip(&none)
                .filter_map(|(c, n)| Some((*c.get(it)?, *n.get(it)?)))
                .unzip();
            if a.is_empty() {
                return None;
            }
            let d: Vec<f64> = b.iter().zip(&a).map(|(n, c)| n - c).collect();
            let (cz_mean, cz_std) = mean_std(&a);
            let (none_mean, none_std) = mean_std(&b);
            let (delta_mean, delta_std) = mean_std(&d);
            Some(EnsembleStat {
                iteration: it,
                runs: a.len(),
                cz_mean,
                cz_std,
                none_mean,
                none_std,
                delta_mean,
                delta_std,
            })
        })
        .collect();

    Ok(EnsembleResult {
        seeds: seeds.to_vec(),
        cz,
        none,
        aborts,
        stats,
    })
}
