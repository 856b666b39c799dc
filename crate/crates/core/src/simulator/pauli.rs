use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Y => (true, true),
            PauliLetter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }
}

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// Tensor product of single-qubit Paulis in symplectic form: qubit `q` holds
/// X if bit `q` of `x` is set, Z if bit `q` of `z` is set, Y if both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PauliString {
    x: u64,
    z: u64,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    pub fn single(qubit: usize, letter: PauliLetter) -> Self {
        let mut s = Self::IDENTITY;
        s.set(qubit, letter);
        s
    }

    /// Builds from `(qubit, letter)` pairs; later pairs overwrite earlier ones.
    pub fn from_pairs<I: IntoIterator<Item = (usize, PauliLetter)>>(pairs: I) -> Self {
        let mut s = Self::IDENTITY;
        for (q, l) in pairs {
            s.set(q, l);
        }
        s
    }

    pub fn set(&mut self, qubit: usize, letter: PauliLetter) {
        assert!(qubit < 64, "qubit index {qubit} exceeds 63");
        let (x, z) = letter.bits();
        let bit = 1u64 << qubit;
        self.x = if x { self.x | bit } else { self.x & !bit };
        self.z = if z { self.z | bit } else { self.z & !bit };
    }

    pub fn letter(&self, qubit: usize) -> PauliLetter {
        if qubit >= 64 {
            return PauliLetter::I;
        }
        PauliLetter::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of qubits needed to hold this string (highest non-identity + 1).
    pub fn min_qubits(&self) -> usize {
        64 - (self.x | self.z).leading_zeros() as usize
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// `self · other = i^k · result`; returns `(k mod 4, result)`.
    pub fn mul(&self, other: &PauliString) -> (u8, PauliString) {
        // Write each string as i^{|x∧z|} X^x Z^z. Moving Z^{z1} past X^{x2}
        // costs (−1)^{|z1∧x2|}.
        let result = PauliString {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        };
        let k = self.y_count() as i64 + other.y_count() as i64 - result.y_count() as i64
            + 2 * (self.z & other.x).count_ones() as i64;
        (k.rem_euclid(4) as u8, result)
    }

    /// Phase of `P|j⟩ = phase · |j ⊕ x⟩`.
    #[inline]
    pub fn basis_phase(&self, j: usize) -> Complex64 {
        let sign = ((j as u64) & self.z).count_ones() & 1;
        I_POWERS[((self.y_count() + 2 * sign) & 3) as usize]
    }

    /// `⟨ψ|P|ψ⟩` for a raw amplitude array.
    pub fn expectation(&self, amps: &[Complex64]) -> Complex64 {
        let x = self.x as usize;
        amps.iter()
            .enumerate()
            .map(|(j, a)| amps[j ^ x].conj() * self.basis_phase(j) * a)
            .sum()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for q in 0..self.min_qubits() {
            let l = self.letter(q);
            if l == PauliLetter::I {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{:?}{}", l, q)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    pub string: PauliString,
}

/// Real-weighted sum of Pauli strings on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl Observable {
    pub fn new(n_qubits: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        if n_qubits > 64 {
            return Err(Error::TooManyQubits(n_qubits));
        }
        for t in &terms {
            if t.string.min_qubits() > n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: t.string.min_qubits() - 1,
                    n_qubits,
                });
            }
            if !t.coeff.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite coefficient {}", t.coeff)));
            }
        }
        Ok(Self { n_qubits, terms })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// Merges like strings and drops terms with `|c| < tol`. Output is sorted
    /// by string so equal operators compare equal.
    pub fn simplified(&self, tol: f64) -> Self {
        let mut acc: BTreeMap<PauliString, f64> = BTreeMap::new();
        for t in &self.terms {
            *acc.entry(t.string).or_insert(0.0) += t.coeff;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| c.abs() >= tol)
            .map(|(string, coeff)| PauliTerm { coeff, string })
            .collect();
        Self {
            n_qubits: self.n_qubits,
            terms,
        }
    }

    pub fn compile(&self) -> CompiledOperator {
        CompiledOperator::new(self)
    }
}

/// Pauli sum regrouped by X-mask: each block is a permutation `j → j ⊕ x`
/// times a diagonal, which makes `H|ψ⟩` cost `(#blocks)·2^n`.
#[derive(Debug, Clone)]
pub struct CompiledOperator {
    n_qubits: usize,
    blocks: Vec<(usize, Vec<Complex64>)>,
}

impl CompiledOperator {
    fn new(obs: &Observable) -> Self {
        let dim = 1usize << obs.n_qubits;
        let mut by_x: BTreeMap<u64, Vec<Complex64>> = BTreeMap::new();
        for t in &obs.terms {
            let diag = by_x
                .entry(t.string.x_mask())
                .or_insert_with(|| vec![Complex64::new(0.0, 0.0); dim]);
            for (j, d) in diag.iter_mut().enumerate() {
                *d += t.coeff * t.string.basis_phase(j);
            }
        }
        Self {
            n_qubits: obs.n_qubits,
            blocks: by_x.into_iter().map(|(x, d)| (x as usize, d)).collect(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// `(x_mask, diagonal)` pairs: `H = Σ_x Σ_j diag[j] |j ⊕ x⟩⟨j|`.
    pub fn blocks(&self) -> impl Iterator<Item = (usize, &[Complex64])> {
        self.blocks.iter().map(|(x, d)| (*x, d.as_slice()))
    }

    /// True when every matrix element is real.
    pub fn is_real(&self) -> bool {
        self.blocks
            .iter()
            .all(|(_, d)| d.iter().all(|c| c.im.abs() <= 1e-14 * (1.0 + c.re.abs())))
    }

    /// `out = H·v`.
    pub fn apply_into(&self, v: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        for (x, diag) in &self.blocks {
            for (j, (d, a)) in diag.iter().zip(v).enumerate() {
                out[j ^ x] += d * a;
            }
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        self.apply_into(v, &mut out);
        out
    }

    /// Real part of `⟨v|H|v⟩` (the imaginary part vanishes for Hermitian H).
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        let mut total = 0.0;
        for (x, diag) in &self.blocks {
            for (j, (d, a)) in diag.iter().zip(v).enumerate() {
                total += (v[j ^ x].conj() * d * a).re;
            }
        }
        total
    }

    /// Matrix element `⟨row|H|col⟩`.
    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        let x = row ^ col;
        self.blocks
            .iter()
            .find(|(bx, _)| *bx == x)
            .map(|(_, d)| d[col])
            .unwrap_or_default()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (x, diag) in &self.blocks {
            for (j, d) in diag.iter().enumerate() {
                m[(j ^ x, j)] += d;
            }
        }
        m
    }
}
