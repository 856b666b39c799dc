use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{particle_number, GroundStateResult, Sector};
use crate::error::{Error, Result};
use crate::hamiltonian::QubitHamiltonian;
use crate::simulator::{CompiledOperator, StateVector};

pub const MAX_ED_QUBITS: usize = 14;

/// Blocks up to this size are diagonalized densely; larger ones by Lanczos.
const DENSE_LIMIT: usize = 1024;

/// Lowest eigenpair of `h`, optionally restricted to a sector.
pub fn solve_ed(h: &QubitHamiltonian, sector: Option<Sector>) -> Result<GroundStateResult> {
    if h.n_qubits() > MAX_ED_QUBITS {
        return Err(Error::DimensionTooLarge(h.n_qubits()));
    }
    solve_ed_compiled(&h.compile(), sector)
}

pub fn solve_ed_compiled(op: &CompiledOperator, sector: Option<Sector>) -> Result<GroundStateResult> {
    if op.n_qubits() > MAX_ED_QUBITS {
        return Err(Error::DimensionTooLarge(op.n_qubits()));
    }
    let dim = op.dim();
    let allowed: Vec<bool> = (0..dim)
        .map(|i| sector.is_none_or(|s| s.contains(i)))
        .collect();
    if !allowed.iter().any(|&a| a) {
        return Err(Error::EmptySector);
    }

    let blocks = coupled_blocks(op, &allowed);
    let mut best: Option<(f64, Vec<usize>, Vec<Complex64>)> = None;
    for block in blocks {
        let (e, v) = lowest_in_block(op, &block)?;
        // strict improvement keeps the choice deterministic under ties
        if best.as_ref().is_none_or(|(b, _, _)| e < *b - 1e-13) {
            best = Some((e, block, v));
        }
    }
    let (energy, block, vec) = best.expect("at least one block");
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (&i, a) in block.iter().zip(vec) {
        amps[i] = a;
    }
    let state = StateVector::from_amplitudes(amps)?;
    Ok(GroundStateResult {
        energy,
        iterations: 1,
        converged: true,
        electrons: particle_number(&state),
        state: Some(state),
    })
}

/// Partitions the allowed basis states into sets that `op` does not couple.
fn coupled_blocks(op: &CompiledOperator, allowed: &[bool]) -> Vec<Vec<usize>> {
    let dim = allowed.len();
    let mut parent: Vec<usize> = (0..dim).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for (x, diag) in op.blocks() {
        if x == 0 {
            continue;
        }
        for (col, d) in diag.iter().enumerate() {
            let row = col ^ x;
            if allowed[col] && allowed[row] && d.norm() > 1e-14 {
                let (a, b) = (find(&mut parent, row), find(&mut parent, col));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..dim {
        if allowed[i] {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
    }
    groups.into_values().collect()
}

fn lowest_in_block(op: &CompiledOperator, block: &[usize]) -> Result<(f64, Vec<Complex64>)> {
    if block.len() > DENSE_LIMIT {
        return lanczos(op, block);
    }
    let n = block.len();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for (c, &col) in block.iter().enumerate() {
        for (r, &row) in block.iter().enumerate() {
            m[(r, c)] = op.element(row, col);
        }
    }
    let real = m.iter().all(|z| z.im.abs() <= 1e-14 * (1.0 + z.re.abs()));
    if real {
        let mut rm = m.map(|z| z.re);
        symmetrize(&mut rm);
        let eig = rm.symmetric_eigen();
        let k = argmin(eig.eigenvalues.as_slice());
        let v = eig.eigenvectors.column(k).iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Ok((eig.eigenvalues[k], v))
    } else {
        // Hermitian A + iB ↦ real symmetric [[A, −B], [B, A]]; every
        // eigenvalue appears twice and (u, w) maps back to u + iw.
        let mut big = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                let z = m[(r, c)];
                big[(r, c)] = z.re;
                big[(r + n, c + n)] = z.re;
                big[(r, c + n)] = -z.im;
                big[(r + n, c)] = z.im;
            }
        }
        symmetrize(&mut big);
        let eig = big.symmetric_eigen();
        let k = argmin(eig.eigenvalues.as_slice());
        let col = eig.eigenvectors.column(k);
        let v = (0..n).map(|i| Complex64::new(col[i], col[i + n])).collect();
        Ok((eig.eigenvalues[k], v))
    }
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let t = m.transpose();
    *m = (&*m + t) * 0.5;
}

fn argmin(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// Lanczos with full reorthogonalization, restricted to `block`.
fn lanczos(op: &CompiledOperator, block: &[usize]) -> Result<(f64, Vec<Complex64>)> {
    let dim = op.dim();
    let n = block.len();
    let max_k = n.min(300);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.random::<f64>() - 0.5, 0.0)).collect();
    normalize(&mut v);

    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut full = vec![Complex64::new(0.0, 0.0); dim];
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    let mut last = f64::INFINITY;

    for k in 0..max_k {
        full.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
        for (&i, a) in block.iter().zip(&v) {
            full[i] = *a;
        }
        op.apply_into(&full, &mut out);
        let mut w: Vec<Complex64> = block.iter().map(|&i| out[i]).collect();
        let alpha: f64 = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum();
        basis.push(v.clone());
        alphas.push(alpha);
        for _ in 0..2 {
            for b in &basis {
                let proj: Complex64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= proj * y);
            }
        }
        let beta = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();

        let (theta, y) = tridiagonal_lowest(&alphas, &betas);
        let residual = beta * y[k].abs();
        if residual < 1e-10 || beta < 1e-12 || (k > 10 && (last - theta).abs() < 1e-14) || k + 1 == max_k {
            let mut vec = vec![Complex64::new(0.0, 0.0); n];
            for (coef, b) in y.iter().zip(&basis) {
                vec.iter_mut().zip(b).for_each(|(x, bb)| *x += coef * bb);
            }
            normalize(&mut vec);
            return Ok((theta, vec));
        }
        last = theta;
        betas.push(beta);
        v = w.into_iter().map(|x| x / beta).collect();
    }
    unreachable!("loop returns on its final iteration")
}

fn tridiagonal_lowest(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let k = alphas.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = t.symmetric_eigen();
    let j = argmin(eig.eigenvalues.as_slice());
    let y: DVector<f64> = eig.eigenvectors.column(j).into_owned();
    (eig.eigenvalues[j], y.iter().copied().collect())
}

fn normalize(v: &mut [Complex64]) {
    let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{Observable, PauliLetter::*, PauliString, PauliTerm};

    fn ham(n: usize, terms: &[(f64, &[(usize, crate::simulator::PauliLetter)])]) -> QubitHamiltonian {
        QubitHamiltonian::new(
            Observable::new(
                n,
                terms
                    .iter()
                    .map(|(c, p)| PauliTerm { coeff: *c, string: PauliString::from_pairs(p.iter().copied()) })
                    .collect(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn single_z() {
        let r = solve_ed(&ham(1, &[(1.0, &[(0, Z)])]), None).unwrap();
        assert!((r.energy + 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_qubit_toy_matches_dense() {
        // 0.5 XX + 0.5 ZZ: eigenvalues {1, 0, 0, −1}; the 4×4 matrix is
        // [[.5,0,0,.5],[0,-.5,.5,0],[0,.5,-.5,0],[.5,0,0,.5]]
        let h = ham(2, &[(0.5, &[(0, X), (1, X)]), (0.5, &[(0, Z), (1, Z)])]);
        let r = solve_ed(&h, None).unwrap();
        assert!((r.energy + 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_hermitian_block() {
        // Y alone has eigenvalues ±1 and a complex matrix
        let r = solve_ed(&ham(1, &[(2.0, &[(0, Y)]), (0.5, &[(0, X)])]), None).unwrap();
        assert!((r.energy + (4.0f64 + 0.25).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sector_restriction() {
        // Z0 + Z1 favours |11⟩ (−2); in the one-electron sector the best is 0
        let h = ham(2, &[(1.0, &[(0, Z)]), (1.0, &[(1, Z)])]);
        assert!((solve_ed(&h, None).unwrap().energy + 2.0).abs() < 1e-12);
        let r = solve_ed(&h, Some(Sector { electrons: 1, twice_sz: 1 })).unwrap();
        assert!(r.energy.abs() < 1e-12);
        assert!(matches!(
            solve_ed(&h, Some(Sector { electrons: 5, twice_sz: 1 })),
            Err(Error::EmptySector)
        ));
    }

    #[test]
    fn too_many_qubits() {
        assert!(matches!(solve_ed(&ham(15, &[(1.0, &[(14, Z)])]), None), Err(Error::DimensionTooLarge(15))));
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        // 11-qubit transverse-field chain: one coupled block of 2048 states
        let n = 11;
        let mut terms: Vec<PauliTerm> = Vec::new();
        for q in 0..n {
            terms.push(PauliTerm { coeff: 0.7, string: PauliString::single(q, X) });
            if q + 1 < n {
                terms.push(PauliTerm { coeff: 1.0, string: PauliString::from_pairs([(q, Z), (q + 1, Z)]) });
            }
        }
        let h = QubitHamiltonian::new(Observable::new(n, terms).unwrap());
        let op = h.compile();
        let block: Vec<usize> = (0..op.dim()).collect();
        let (e_lanczos, _) = lanczos(&op, &block).unwrap();
        let dense = op.to_dense().map(|z| z.re).symmetric_eigen();
        assert!((e_lanczos - dense.eigenvalues.min()).abs() < 1e-9);
        let r = solve_ed(&h, None).unwrap();
        assert!((r.energy - dense.eigenvalues.min()).abs() < 1e-9);
    }
}
