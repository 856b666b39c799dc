use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::integrals::IntegralSet;
use crate::error::{Error, Result};

/// Smallest overlap eigenvalue accepted before the basis is deemed singular.
const MIN_OVERLAP_EIGENVALUE: f64 = 1e-10;

/// One-electron orbitals the many-body Hamiltonian is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitalBasis {
    /// Symmetrically orthogonalized atomic orbitals.
    #[default]
    Lowdin,
    /// Eigenvectors of the one-body Hamiltonian in the Löwdin basis,
    /// ordered by energy.
    CoreHamiltonian,
}

impl std::str::FromStr for OrbitalBasis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lowdin" => Ok(Self::Lowdin),
            "core-hamiltonian" => Ok(Self::CoreHamiltonian),
            _ => Err(Error::InvalidArgument(format!("unknown orbital basis `{s}`"))),
        }
    }
}

/// Applies `C` to every index: `h' = Cᵀ h C`, `S' = Cᵀ S C`, and the
/// two-electron tensor by four quarter transformations.
pub fn transform(ints: &IntegralSet, c: &DMatrix<f64>) -> IntegralSet {
    let n = ints.n_orbitals();
    let m = c.ncols();
    let overlap = c.transpose() * &ints.overlap * c;
    let one_body = c.transpose() * &ints.one_body * c;

    // quarter transformations, one index at a time (last index first)
    let mut cur = ints.two_body.clone();
    let mut dims = [n, n, n, n];
    for axis in (0..4).rev() {
        let mut out_dims = dims;
        out_dims[axis] = m;
        let mut out = vec![0.0; out_dims.iter().product()];
        let stride = |d: &[usize; 4], ax: usize| d[ax + 1..].iter().product::<usize>();
        let in_stride = stride(&dims, axis);
        let out_stride = stride(&out_dims, axis);
        let outer: usize = dims[..axis].iter().product();
        for o in 0..outer {
            for inner in 0..in_stride {
                for new in 0..m {
                    let mut acc = 0.0;
                    for old in 0..dims[axis] {
                        acc += c[(old, new)] * cur[(o * dims[axis] + old) * in_stride + inner];
                    }
                    out[(o * m + new) * out_stride + inner] = acc;
                }
            }
        }
        cur = out;
        dims = out_dims;
    }

    IntegralSet {
        overlap,
        one_body,
        two_body: cur,
        nuclear_repulsion: ints.nuclear_repulsion,
    }
}

/// Symmetric orthogonalization by `S^{-1/2}`.
pub fn orthogonalize(ints: &IntegralSet) -> Result<IntegralSet> {
    let eig = ints.overlap.clone().symmetric_eigen();
    let min = eig.eigenvalues.min();
    if !(min > MIN_OVERLAP_EIGENVALUE) {
        return Err(Error::NotPositiveDefinite(min));
    }
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| 1.0 / v.sqrt()));
    let x = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
    let mut out = transform(ints, &x);
    // restore exact symmetry lost to rounding
    symmetrize(&mut out.one_body);
    symmetrize(&mut out.overlap);
    Ok(out)
}

/// Rotates orthonormal integrals into the eigenbasis of the one-body term.
pub fn core_hamiltonian_basis(ints: &IntegralSet) -> Result<IntegralSet> {
    check_orthonormal(ints)?;
    let eig = ints.one_body.clone().symmetric_eigen();
    let n = ints.n_orbitals();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut c = DMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(old).into_owned();
        // deterministic sign: largest-magnitude component positive
        let imax = col.iamax();
        if col[imax] < 0.0 {
            col = -col;
        }
        c.set_column(new, &col);
    }
    let mut out = transform(ints, &c);
    symmetrize(&mut out.one_body);
    symmetrize(&mut out.overlap);
    Ok(out)
}

pub fn in_basis(ints: &IntegralSet, basis: OrbitalBasis) -> Result<IntegralSet> {
    let lowdin = orthogonalize(ints)?;
    match basis {
        OrbitalBasis::Lowdin => Ok(lowdin),
        OrbitalBasis::CoreHamiltonian => core_hamiltonian_basis(&lowdin),
    }
}

pub(crate) fn check_orthonormal(ints: &IntegralSet) -> Result<()> {
    let n = ints.n_orbitals();
    let dev = (&ints.overlap - DMatrix::<f64>::identity(n, n)).amax();
    if dev > 1e-8 {
        return Err(Error::NotOrthonormal(dev));
    }
    Ok(())
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let t = m.transpose();
    *m = (&*m + t) * 0.5;
}
