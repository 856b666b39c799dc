//! Closed-form integrals over s-type Gaussians.
//!
//! Two-electron integrals use chemists' notation:
//! `(pq|rs) = ∫∫ φ_p(1) φ_q(1) r₁₂⁻¹ φ_r(2) φ_s(2)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::basis::{ContractedGaussian, ShellData};
use super::boys::boys_f0;
use super::Geometry;
use crate::error::Result;
use crate::BOHR_IN_ANGSTROM;

/// Atomic- or molecular-orbital integrals for a spin-free Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSet {
    pub overlap: DMatrix<f64>,
    pub one_body: DMatrix<f64>,
    /// `(pq|rs)` flattened as `((p·n + q)·n + r)·n + s`.
    pub two_body: Vec<f64>,
    pub nuclear_repulsion: f64,
}

impl IntegralSet {
    pub fn n_orbitals(&self) -> usize {
        self.overlap.nrows()
    }

    #[inline]
    pub fn eri(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.n_orbitals();
        self.two_body[((p * n + q) * n + r) * n + s]
    }
}

pub(crate) fn eri_index(n: usize, p: usize, q: usize, r: usize, s: usize) -> usize {
    ((p * n + q) * n + r) * n + s
}

fn gaussian_product(a: f64, xa: f64, b: f64, xb: f64) -> (f64, f64, f64) {
    let p = a + b;
    let prefactor = (-a * b / p * (xa - xb).powi(2)).exp();
    (p, (a * xa + b * xb) / p, prefactor)
}

pub(crate) fn overlap(g1: &ContractedGaussian, g2: &ContractedGaussian) -> f64 {
    let mut s = 0.0;
    for (a, ca) in g1.primitives() {
        for (b, cb) in g2.primitives() {
            let (p, _, k) = gaussian_product(a, g1.center, b, g2.center);
            s += ca * cb * (PI / p).powf(1.5) * k;
        }
    }
    s
}

fn kinetic(g1: &ContractedGaussian, g2: &ContractedGaussian) -> f64 {
    let r2 = (g1.center - g2.center).powi(2);
    let mut t = 0.0;
    for (a, ca) in g1.primitives() {
        for (b, cb) in g2.primitives() {
            let (p, _, k) = gaussian_product(a, g1.center, b, g2.center);
            let mu = a * b / p;
            t += ca * cb * mu * (3.0 - 2.0 * mu * r2) * (PI / p).powf(1.5) * k;
        }
    }
    t
}

fn nuclear_attraction(
    g1: &ContractedGaussian,
    g2: &ContractedGaussian,
    center: f64,
    charge: f64,
) -> Result<f64> {
    let mut v = 0.0;
    for (a, ca) in g1.primitives() {
        for (b, cb) in g2.primitives() {
            let (p, xp, k) = gaussian_product(a, g1.center, b, g2.center);
            v -= ca * cb * charge * 2.0 * PI / p * k * boys_f0(p * (xp - center).powi(2))?;
        }
    }
    Ok(v)
}

fn repulsion(
    g1: &ContractedGaussian,
    g2: &ContractedGaussian,
    g3: &ContractedGaussian,
    g4: &ContractedGaussian,
) -> Result<f64> {
    let mut total = 0.0;
    for (a, ca) in g1.primitives() {
        for (b, cb) in g2.primitives() {
            let (p, xp, kab) = gaussian_product(a, g1.center, b, g2.center);
            for (c, cc) in g3.primitives() {
                for (d, cd) in g4.primitives() {
                    let (q, xq, kcd) = gaussian_product(c, g3.center, d, g4.center);
                    let alpha = p * q / (p + q);
                    total += ca * cb * cc * cd * 2.0 * PI.powf(2.5)
                        / (p * q * (p + q).sqrt())
                        * kab
                        * kcd
                        * boys_f0(alpha * (xp - xq).powi(2))?;
                }
            }
        }
    }
    Ok(total)
}

/// Integrals for one contracted s function per atom, using the bundled
/// STO-3G hydrogen shell.
pub fn compute_integrals(geometry: &Geometry) -> Result<IntegralSet> {
    compute_integrals_with(geometry, &ShellData::sto3g_hydrogen())
}

pub fn compute_integrals_with(geometry: &Geometry, shell: &ShellData) -> Result<IntegralSet> {
    geometry.validate()?;
    let centers: Vec<f64> = geometry.positions().iter().map(|x| x / BOHR_IN_ANGSTROM).collect();
    let basis: Vec<ContractedGaussian> = centers.iter().map(|&c| ContractedGaussian::new(c, shell)).collect();
    let n = basis.len();

    let mut overlap_m = DMatrix::zeros(n, n);
    let mut one_body = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let s = if i == j { 1.0 } else { overlap(&basis[i], &basis[j]) };
            let mut h = kinetic(&basis[i], &basis[j]);
            for (&c, &z) in centers.iter().zip(geometry.charges()) {
                h += nuclear_attraction(&basis[i], &basis[j], c, z)?;
            }
            overlap_m[(i, j)] = s;
            overlap_m[(j, i)] = s;
            one_body[(i, j)] = h;
            one_body[(j, i)] = h;
        }
    }

    // fill from canonical (p≥q, r≥s, pq≥rs) quadruples so the 8-fold
    // symmetry is exact
    let mut two_body = vec![0.0; n.pow(4)];
    for p in 0..n {
        for q in 0..=p {
            let pq = p * (p + 1) / 2 + q;
            for r in 0..n {
                for s in 0..=r {
                    let rs = r * (r + 1) / 2 + s;
                    if rs > pq {
                        continue;
                    }
                    let v = repulsion(&basis[p], &basis[q], &basis[r], &basis[s])?;
                    for (a, b, c, d) in [
                        (p, q, r, s),
                        (q, p, r, s),
                        (p, q, s, r),
                        (q, p, s, r),
                        (r, s, p, q),
                        (s, r, p, q),
                        (r, s, q, p),
                        (s, r, q, p),
                    ] {
                        two_body[eri_index(n, a, b, c, d)] = v;
                    }
                }
            }
        }
    }

    let mut nuclear_repulsion = 0.0;
    for i in 0..n {
        for j in 0..i {
            nuclear_repulsion +=
                geometry.charges()[i] * geometry.charges()[j] / (centers[i] - centers[j]).abs();
        }
    }

    Ok(IntegralSet {
        overlap: overlap_m,
        one_body,
        two_body,
        nuclear_repulsion,
    })
}
