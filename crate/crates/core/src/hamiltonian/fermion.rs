//! Second-quantized Hamiltonians and their Jordan–Wigner image.
//!
//! Spin orbitals are interleaved: spatial orbital `p` gives spin orbitals
//! `2p` (α) and `2p + 1` (β), and spin orbital `j` lives on qubit `j`.
//! Qubit state `|1⟩` means occupied, so
//! `a†_j = Z_0 ⋯ Z_{j−1} (X_j − iY_j)/2`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::integrals::IntegralSet;
use super::orbitals::check_orthonormal;
use super::QubitHamiltonian;
use crate::error::{Error, Result};
use crate::simulator::{Observable, PauliLetter, PauliString, PauliTerm};

/// Coefficients below this magnitude are dropped after merging.
pub const DROP_TOLERANCE: f64 = 1e-12;

/// `H = Σ h_pq a†_p a_q + ½ Σ ⟨pq|rs⟩ a†_p a†_q a_s a_r + constant`
/// over spin orbitals, with physicists' `⟨pq|rs⟩` flattened row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOrbitalHamiltonian {
    pub one_body: DMatrix<f64>,
    pub two_body: Vec<f64>,
    pub constant: f64,
}

impl SpinOrbitalHamiltonian {
    pub fn n_spin_orbitals(&self) -> usize {
        self.one_body.nrows()
    }

    #[inline]
    pub fn two(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.n_spin_orbitals();
        self.two_body[((p * n + q) * n + r) * n + s]
    }

    /// Expands orthonormal spatial integrals into interleaved spin orbitals.
    pub fn from_spatial(ints: &IntegralSet) -> Result<Self> {
        check_orthonormal(ints)?;
        let n = ints.n_orbitals();
        let ns = 2 * n;
        let mut one_body = DMatrix::zeros(ns, ns);
        let mut two_body = vec![0.0; ns.pow(4)];
        for p in 0..ns {
            for q in 0..ns {
                if p % 2 == q % 2 {
                    one_body[(p, q)] = ints.one_body[(p / 2, q / 2)];
                }
                for r in 0..ns {
                    if p % 2 != r % 2 {
                        continue;
                    }
                    for s in 0..ns {
                        if q % 2 != s % 2 {
                            continue;
                        }
                        // ⟨pq|rs⟩ = (pr|qs)
                        two_body[((p * ns + q) * ns + r) * ns + s] = ints.eri(p / 2, r / 2, q / 2, s / 2);
                    }
                }
            }
        }
        Ok(Self {
            one_body,
            two_body,
            constant: ints.nuclear_repulsion,
        })
    }

    /// Jordan–Wigner mapping to a merged Pauli sum.
    pub fn jordan_wigner(&self) -> Result<QubitHamiltonian> {
        let n = self.n_spin_orbitals();
        let create: Vec<Ladder> = (0..n).map(|j| Ladder::new(j, true)).collect();
        let annihilate: Vec<Ladder> = (0..n).map(|j| Ladder::new(j, false)).collect();

        let mut acc: HashMap<PauliString, Complex64> = HashMap::new();
        *acc.entry(PauliString::IDENTITY).or_default() += self.constant;

        for p in 0..n {
            for q in 0..n {
                let h = self.one_body[(p, q)];
                if h == 0.0 {
                    continue;
                }
                for (c, s) in create[p].times(&annihilate[q]) {
                    *acc.entry(s).or_default() += h * c;
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                if p == q {
                    continue;
                }
                let pq = create[p].times(&create[q]);
                for r in 0..n {
                    for s in 0..n {
                        if r == s {
                            continue;
                        }
                        let v = self.two(p, q, r, s);
                        if v == 0.0 {
                            continue;
                        }
                        // a†_p a†_q a_s a_r
                        let sr = annihilate[s].times(&annihilate[r]);
                        for (c1, s1) in &pq {
                            for (c2, s2) in &sr {
                                let (k, prod) = s1.mul(s2);
                                *acc.entry(prod).or_default() += 0.5 * v * c1 * c2 * i_pow(k);
                            }
                        }
                    }
                }
            }
        }

        let mut terms = Vec::with_capacity(acc.len());
        for (string, c) in acc {
            if c.im.abs() > 1e-10 {
                return Err(Error::InvalidArgument(format!(
                    "non-Hermitian input: imaginary coefficient {} on `{string}`",
                    c.im
                )));
            }
            terms.push(PauliTerm { coeff: c.re, string });
        }
        let obs = Observable::new(n, terms)?.simplified(DROP_TOLERANCE);
        Ok(QubitHamiltonian::new(obs))
    }
}

fn i_pow(k: u8) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// A ladder operator as a sum of two Pauli strings.
struct Ladder(Vec<(Complex64, PauliString)>);

impl Ladder {
    fn new(j: usize, dagger: bool) -> Self {
        let tail = (0..j).map(|k| (k, PauliLetter::Z));
        let x = PauliString::from_pairs(tail.clone().chain([(j, PauliLetter::X)]));
        let y = PauliString::from_pairs(tail.chain([(j, PauliLetter::Y)]));
        let sign = if dagger { -1.0 } else { 1.0 };
        Ladder(vec![
            (Complex64::new(0.5, 0.0), x),
            (Complex64::new(0.0, 0.5 * sign), y),
        ])
    }

    fn times(&self, other: &Ladder) -> Vec<(Complex64, PauliString)> {
        let mut out = Vec::with_capacity(4);
        for (c1, s1) in &self.0 {
            for (c2, s2) in &other.0 {
                let (k, s) = s1.mul(s2);
                out.push((c1 * c2 * i_pow(k), s));
            }
        }
        out
    }
}

/// Builds the qubit Hamiltonian of orthonormal spatial integrals.
pub fn to_qubit_hamiltonian(ints: &IntegralSet) -> Result<QubitHamiltonian> {
    SpinOrbitalHamiltonian::from_spatial(ints)?.jordan_wigner()
}
