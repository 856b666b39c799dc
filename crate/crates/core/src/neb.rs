//! Nudged-elastic-band forces over reaction-coordinate vectors.
//!
//! Rows are ordered IS, images…, FS. Endpoints are fixed, so only images carry
//! forces. Tangents use the energy-weighted ("improved") construction, which
//! keeps kinks from forming around extrema.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NebParams {
    /// Spring constant, Hartree/Å².
    pub spring_constant: f64,
    /// Central-difference step for energy gradients, Å.
    pub coord_step: f64,
}

impl Default for NebParams {
    fn default() -> Self {
        Self {
            spring_constant: 0.1,
            coord_step: 0.1,
        }
    }
}

impl NebParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.spring_constant > 0.0) || !(self.coord_step > 0.0) {
            return Err(Error::InvalidArgument(
                "spring constant and coordinate step must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageState {
    /// Reaction coordinates, Å.
    pub r: Vec<f64>,
    /// Hartree.
    pub energy: f64,
    /// Hartree/Å.
    pub grad: Vec<f64>,
    pub tangent: Vec<f64>,
    pub force: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NebReport {
    /// Mean image force norm, Hartree/Å.
    pub fbar: f64,
    pub images: Vec<ImageState>,
    pub is_energy: f64,
    pub fs_energy: f64,
    /// Highest image energy minus IS energy, Hartree.
    pub activation_energy: f64,
    /// Index into `images` of the highest image.
    pub highest_image: usize,
}

impl NebReport {
    /// `|E_a − E_a^ref|` for a reference barrier.
    pub fn delta_saddle(&self, reference_barrier: f64) -> f64 {
        (self.activation_energy - reference_barrier).abs()
    }
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalized(v: Vec<f64>) -> Result<Vec<f64>> {
    let n = norm(&v);
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::DegenerateTangent);
    }
    Ok(v.into_iter().map(|x| x / n).collect())
}

/// Unit tangent at the middle of three consecutive rows.
///
/// Monotone energies pick the uphill neighbour; at an extremum (or a tie) the
/// two one-sided tangents are mixed with weights `ΔE_max`, `ΔE_min`, the
/// larger weight going to the side of the higher neighbour. If both energy
/// differences vanish the unweighted sum is used.
pub fn tangent(
    r_prev: &[f64],
    r_cur: &[f64],
    r_next: &[f64],
    e_prev: f64,
    e_cur: f64,
    e_next: f64,
) -> Result<Vec<f64>> {
    let plus = sub(r_next, r_cur);
    let minus = sub(r_cur, r_prev);
    if norm(&plus) == 0.0 || norm(&minus) == 0.0 {
        return Err(Error::DegenerateTangent);
    }
    if e_next > e_cur && e_cur > e_prev {
        return normalized(plus);
    }
    if e_next < e_cur && e_cur < e_prev {
        return normalized(minus);
    }
    let d_next = (e_next - e_cur).abs();
    let d_prev = (e_prev - e_cur).abs();
    let (hi, lo) = (d_next.max(d_prev), d_next.min(d_prev));
    let (w_plus, w_minus) = if hi == 0.0 {
        (1.0, 1.0)
    } else if e_next > e_prev {
        (hi, lo)
    } else {
        (lo, hi)
    };
    normalized(plus.iter().zip(&minus).map(|(p, m)| w_plus * p + w_minus * m).collect())
}

/// `K (|R₊ − R| − |R − R₋|) τ̂`.
pub fn spring_force_parallel(r_prev: &[f64], r_cur: &[f64], r_next: &[f64], tangent: &[f64], k: f64) -> Vec<f64> {
    let s = k * (norm(&sub(r_next, r_cur)) - norm(&sub(r_cur, r_prev)));
    tangent.iter().map(|t| s * t).collect()
}

/// Component of `grad` orthogonal to the unit `tangent`.
pub fn grad_perp(grad: &[f64], tangent: &[f64]) -> Vec<f64> {
    let g = dot(grad, tangent);
    grad.iter().zip(tangent).map(|(x, t)| x - g * t).collect()
}

pub fn image_force(spring_parallel: &[f64], grad_perpendicular: &[f64]) -> Vec<f64> {
    sub(spring_parallel, grad_perpendicular)
}

/// Mean of the force norms.
pub fn fbar<V: AsRef<[f64]>>(forces: &[V]) -> Result<f64> {
    if forces.is_empty() {
        return Err(Error::NoImages);
    }
    Ok(forces.iter().map(|f| norm(f.as_ref())).sum::<f64>() / forces.len() as f64)
}

/// Central differences, `2·dim` oracle calls. Failures carry the probe point.
pub fn numeric_gradient<F>(oracle: F, r: &[f64], step: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("gradient step must be positive, got {step}")));
    }
    let probe = |p: Vec<f64>| {
        oracle(&p).map_err(|e| Error::Probe {
            geometry: p.clone(),
            source: Box::new(e),
        })
    };
    (0..r.len())
        .map(|j| {
            let mut up = r.to_vec();
            up[j] += step;
            let mut down = r.to_vec();
            down[j] -= step;
            Ok((probe(up)? - probe(down)?) / (2.0 * step))
        })
        .collect()
}

/// Highest image energy (endpoints excluded) minus `e_is`, with the image
/// index.
pub fn activation_energy(e_is: f64, image_energies: &[f64]) -> Result<(f64, usize)> {
    let (idx, e) = image_energies
        .iter()
        .copied()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, e)| match best {
            Some((_, b)) if b >= e => best,
            _ => Some((i, e)),
        })
        .ok_or(Error::NoImages)?;
    Ok((e - e_is, idx))
}

/// Assembles tangents, forces and `F̄` from per-row coordinates and energies
/// and per-image gradients (`gradients[i]` belongs to row `i + 1`).
pub fn assemble(rows: &[Vec<f64>], energies: &[f64], gradients: &[Vec<f64>], params: &NebParams) -> Result<NebReport> {
    params.validate()?;
    if rows.len() < 3 {
        return Err(Error::NoImages);
    }
    let n_images = rows.len() - 2;
    if energies.len() != rows.len() || gradients.len() != n_images {
        return Err(Error::InvalidArgument(format!(
            "{} rows need {} energies and {} gradients, got {} and {}",
            rows.len(),
            rows.len(),
            n_images,
            energies.len(),
            gradients.len()
        )));
    }
    let mut images = Vec::with_capacity(n_images);
    for i in 1..=n_images {
        let t = tangent(&rows[i - 1], &rows[i], &rows[i + 1], energies[i - 1], energies[i], energies[i + 1])?;
        let spring = spring_force_parallel(&rows[i - 1], &rows[i], &rows[i + 1], &t, params.spring_constant);
        let perp = grad_perp(&gradients[i - 1], &t);
        images.push(ImageState {
            r: rows[i].clone(),
            energy: energies[i],
            grad: gradients[i - 1].clone(),
            force: image_force(&spring, &perp),
            tangent: t,
        });
    }
    let forces: Vec<&[f64]> = images.iter().map(|im| im.force.as_slice()).collect();
    let fbar = fbar(&forces)?;
    let (activation_energy, highest_image) = activation_energy(energies[0], &energies[1..=n_images])?;
    Ok(NebReport {
        fbar,
        images,
        is_energy: energies[0],
        fs_energy: energies[rows.len() - 1],
        activation_energy,
        highest_image,
    })
}

/// Evaluates every row's energy and every image's gradient with `oracle`,
/// then assembles the report.
pub fn evaluate<F>(rows: &[Vec<f64>], oracle: F, params: &NebParams) -> Result<NebReport>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let energies = rows
        .iter()
        .map(|r| {
            oracle(r).map_err(|e| Error::Probe {
                geometry: r.clone(),
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let gradients = rows[1..rows.len().saturating_sub(1)]
        .iter()
        .map(|r| numeric_gradient(&oracle, r, params.coord_step))
        .collect::<Result<Vec<_>>>()?;
    assemble(rows, &energies, &gradients, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_extremum_tangent() {
        let t = tangent(&[0.8, 1.2], &[0.9, 1.0], &[1.1, 0.9], -1.60, -1.57, -1.58).unwrap();
        // 0.03·(0.2, −0.1) + 0.01·(0.1, −0.2) = (0.007, −0.005)
        let n = (0.007f64.powi(2) + 0.005f64.powi(2)).sqrt();
        assert!((t[0] - 0.007 / n).abs() < 1e-12 && (t[1] + 0.005 / n).abs() < 1e-12);
        assert!((t[0] - 0.8137).abs() < 1e-4 && (t[1] + 0.5812).abs() < 1e-4);
    }

    #[test]
    fn monotone_tangents() {
        let t = tangent(&[0.0], &[1.0], &[3.0], 0.0, 1.0, 2.0).unwrap();
        assert_eq!(t, vec![1.0]);
        let t = tangent(&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], 2.0, 1.0, 0.0).unwrap();
        assert_eq!(t, vec![1.0, 0.0]);
    }

    #[test]
    fn reversed_path_flips_tangent() {
        let a = tangent(&[0.8, 1.2], &[0.9, 1.0], &[1.1, 0.9], -1.60, -1.57, -1.58).unwrap();
        let b = tangent(&[1.1, 0.9], &[0.9, 1.0], &[0.8, 1.2], -1.58, -1.57, -1.60).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x + y).abs() < 1e-12);
        }
    }

    #[test]
    fn coincident_rows_are_degenerate() {
        assert!(matches!(tangent(&[1.0], &[1.0], &[2.0], 0.0, 0.0, 0.0), Err(Error::DegenerateTangent)));
        // opposite unit steps with equal energies cancel
        assert!(matches!(tangent(&[0.0], &[1.0], &[0.0], 0.0, 0.0, 0.0), Err(Error::DegenerateTangent)));
    }

    #[test]
    fn spring_examples() {
        assert_eq!(spring_force_parallel(&[0.0], &[1.0], &[2.0], &[1.0], 0.1), vec![0.0]);
        let f = spring_force_parallel(&[0.0, 0.0], &[0.1, 0.0], &[0.4, 0.0], &[1.0, 0.0], 0.1);
        assert!((f[0] - 0.02).abs() < 1e-15 && f[1] == 0.0);
        let g = spring_force_parallel(&[0.0, 0.0], &[0.1, 0.0], &[0.4, 0.0], &[1.0, 0.0], 0.2);
        assert!((g[0] - 2.0 * f[0]).abs() < 1e-15);
    }

    #[test]
    fn projection_and_force_examples() {
        assert_eq!(grad_perp(&[1.0, 1.0], &[1.0, 0.0]), vec![0.0, 1.0]);
        assert_eq!(grad_perp(&[2.0, 0.0], &[1.0, 0.0]), vec![0.0, 0.0]);
        assert_eq!(grad_perp(&[0.0, 3.0], &[1.0, 0.0]), vec![0.0, 3.0]);
        assert_eq!(image_force(&[0.02, 0.0], &[0.0, 1.0]), vec![0.02, -1.0]);
    }

    #[test]
    fn fbar_examples() {
        assert!((fbar(&[vec![0.3, 0.4]]).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(fbar(&[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap(), 0.0);
        assert!(matches!(fbar::<Vec<f64>>(&[]), Err(Error::NoImages)));
    }

    #[test]
    fn gradient_exact_on_quadratic() {
        let g = numeric_gradient(|r: &[f64]| Ok(r.iter().map(|x| x * x).sum()), &[0.3, -1.2], 0.1).unwrap();
        assert!((g[0] - 0.6).abs() < 1e-12 && (g[1] + 2.4).abs() < 1e-12);
    }

    #[test]
    fn gradient_is_second_order() {
        let f = |r: &[f64]| Ok(r[0].powi(4));
        let exact = 4.0 * 0.7f64.powi(3);
        let e1 = (numeric_gradient(f, &[0.7], 0.1).unwrap()[0] - exact).abs();
        let e2 = (numeric_gradient(f, &[0.7], 0.05).unwrap()[0] - exact).abs();
        assert!((e1 / e2 - 4.0).abs() < 0.1, "{}", e1 / e2);
    }

    #[test]
    fn gradient_reports_probe() {
        let e = numeric_gradient(|r: &[f64]| if r[0] < 0.0 { Err(Error::NoTerms) } else { Ok(r[0]) }, &[0.05], 0.1)
            .unwrap_err();
        match e {
            Error::Probe { geometry, .. } => assert!((geometry[0] + 0.05).abs() < 1e-15),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn activation_energy_over_images() {
        assert_eq!(activation_energy(-1.0, &[-0.9, -0.8, -0.95]).unwrap(), (0.19999999999999996, 1));
        assert_eq!(activation_energy(-1.0, &[-1.0, -1.0]).unwrap(), (0.0, 0));
        assert!(activation_energy(0.0, &[]).is_err());
    }
}
