//! CSV and JSON artifacts.
//!
//! `iterations.csv`: `iteration,fbar,activation_energy,is_energy,solves`,
//! then `img{i}_r_ab,img{i}_r_bc,img{i}_energy` per image (further bonds
//! continue the letters: `r_cd`, …). Lengths in Å, energies in Hartree,
//! forces in Hartree/Å.
//!
//! `pes.csv`: `r_ab,r_bc,energy`, row-major with `r_ab` outermost.
//!
//! `ensemble.csv`: `iteration,runs,cz_mean,cz_std,none_mean,none_std,
//! delta_mean,delta_std`, where delta is `F̄_none − F̄_cz` per seed.
//! `ensemble_runs.csv`: `seed,arm,iteration,fbar`.

use std::path::Path;

use qneb_core::driver::{EnsembleResult, IterationRecord};

use crate::error::CliError;

/// Scientific notation with 13 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.12e}")
}

fn bond_name(j: usize) -> String {
    let letter = |k: usize| (b'a' + (k % 26) as u8) as char;
    format!("r_{}{}", letter(j), letter(j + 1))
}

pub fn write_iterations(path: &Path, records: &[IterationRecord]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    let Some(first) = records.first() else {
        w.write_record(["iteration", "fbar", "activation_energy", "is_energy", "solves"])?;
        w.flush()?;
        return Ok(());
    };
    let n_rows = first.rows.len();
    let n_bonds = first.rows[0].len();
    let mut header: Vec<String> = ["iteration", "fbar", "activation_energy", "is_energy", "solves"]
        .map(String::from)
        .to_vec();
    for i in 1..n_rows - 1 {
        for j in 0..n_bonds {
            header.push(format!("img{i}_{}", bond_name(j)));
        }
        header.push(format!("img{i}_energy"));
    }
    w.write_record(&header)?;
    for r in records {
        let mut row = vec![
            r.iteration.to_string(),
            num(r.fbar),
            num(r.activation_energy),
            num(r.energies[0]),
            r.solves.to_string(),
        ];
        for i in 1..n_rows - 1 {
            row.extend(r.rows[i].iter().map(|x| num(*x)));
            row.push(num(r.energies[i]));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_pes(path: &Path, grid: &[(f64, f64, f64)]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["r_ab", "r_bc", "energy"])?;
    for (a, b, e) in grid {
        w.write_record([num(*a), num(*b), num(*e)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_ensemble(dir: &Path, result: &EnsembleResult) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(dir.join("ensemble.csv"))?;
    w.write_record([
        "iteration",
        "runs",
        "cz_mean",
        "cz_std",
        "none_mean",
        "none_std",
        "delta_mean",
        "delta_std",
    ])?;
    for s in &result.stats {
        w.write_record([
            s.iteration.to_string(),
            s.runs.to_string(),
            num(s.cz_mean),
            num(s.cz_std),
            num(s.none_mean),
            num(s.none_std),
            num(s.delta_mean),
            num(s.delta_std),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("ensemble_runs.csv"))?;
    w.write_record(["seed", "arm", "iteration", "fbar"])?;
    for (k, seed) in result.seeds.iter().enumerate() {
        for (arm, series) in [("cz", &result.cz[k]), ("none", &result.none[k])] {
            for (it, f) in series.iter().enumerate() {
                w.write_record([seed.to_string(), arm.to_string(), it.to_string(), num(*f)])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
