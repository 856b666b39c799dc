use num_complex::Complex64;

use super::circuit::{Circuit, Gate};
use super::pauli::Observable;
use super::MAX_QUBITS;
use crate::error::{Error, Result};

/// Normalized amplitude vector over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wraps an amplitude array, normalizing it.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude length {dim} is not a power of two"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidArgument("zero or non-finite state".into()));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            })
        } else {
            Ok(())
        }
    }

    /// Applies one gate in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.apply_unchecked(gate);
        Ok(())
    }

    pub(crate) fn apply_unchecked(&mut self, gate: &Gate) {
        match *gate {
            Gate::Rx { target, angle } => {
                let (s, c) = (angle / 2.0).sin_cos();
                let m = [
                    [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                    [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
                ];
                self.apply_1q(target, m);
            }
            Gate::Ry { target, angle } => {
                // real matrix; avoid complex multiplies
                let (s, c) = (angle / 2.0).sin_cos();
                let bit = 1usize << target;
                for i in 0..self.amps.len() {
                    if i & bit == 0 {
                        let a0 = self.amps[i];
                        let a1 = self.amps[i | bit];
                        self.amps[i] = a0 * c - a1 * s;
                        self.amps[i | bit] = a0 * s + a1 * c;
                    }
                }
            }
            Gate::Rz { target, angle } => {
                let (s, c) = (angle / 2.0).sin_cos();
                let p0 = Complex64::new(c, -s);
                let p1 = Complex64::new(c, s);
                let bit = 1usize << target;
                for (i, a) in self.amps.iter_mut().enumerate() {
                    *a *= if i & bit == 0 { p0 } else { p1 };
                }
            }
            Gate::Cz { control, target } => {
                let mask = (1usize << control) | (1usize << target);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *a = -*a;
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let cbit = 1usize << control;
                let tbit = 1usize << target;
                for i in 0..self.amps.len() {
                    if i & cbit != 0 && i & tbit == 0 {
                        self.amps.swap(i, i | tbit);
                    }
                }
            }
        }
    }

    fn apply_1q(&mut self, target: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << target;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Applies every gate of `circuit` in order.
    pub fn run(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.n_qubits,
                found: circuit.n_qubits(),
            });
        }
        for gate in circuit.gates() {
            self.apply_unchecked(gate);
        }
        Ok(())
    }

    /// `Σ_k c_k ⟨ψ|P_k|ψ⟩`.
    pub fn expectation(&self, obs: &Observable) -> Result<f64> {
        if obs.n_qubits() != self.n_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.n_qubits,
                found: obs.n_qubits(),
            });
        }
        let mut total = Complex64::new(0.0, 0.0);
        for term in obs.terms() {
            total += term.coeff * term.string.expectation(&self.amps);
        }
        debug_assert!(total.im.abs() <= 1e-10 * (1.0 + total.re.abs()));
        Ok(total.re)
    }

    /// Probability that qubit `m` reads 0.
    pub fn prob_zero(&self, m: usize) -> Result<f64> {
        self.check_qubit(m)?;
        let bit = 1usize << m;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// `prob_zero` for every qubit, in one pass.
    pub fn marginals_zero(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.n_qubits];
        for (i, a) in self.amps.iter().enumerate() {
            let w = a.norm_sqr();
            for (m, pm) in p.iter_mut().enumerate() {
                if i & (1 << m) == 0 {
                    *pm += w;
                }
            }
        }
        p
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &[Complex64], b: &[Complex64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    #[test]
    fn ry_pi_flips_zero() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply(&Gate::Ry { target: 0, angle: PI }).unwrap();
        assert!(close(s.amplitudes(), &[c(0.0, 0.0), c(1.0, 0.0)]));
    }

    #[test]
    fn cz_negates_11() {
        let mut s = StateVector::basis(2, 3).unwrap();
        s.apply(&Gate::Cz { control: 0, target: 1 }).unwrap();
        assert!(close(s.amplitudes(), &[c(0., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]));
    }

    #[test]
    fn rx_half_pi() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply(&Gate::Rx { target: 0, angle: PI / 2.0 }).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!(close(s.amplitudes(), &[c(h, 0.0), c(0.0, -h)]));
    }

    #[test]
    fn bell_state() {
        let mut circ = Circuit::new(2);
        circ.push(Gate::Ry { target: 0, angle: PI / 2.0 }).unwrap();
        circ.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        let mut s = StateVector::zero(2).unwrap();
        s.run(&circ).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!(close(s.amplitudes(), &[c(h, 0.), c(0., 0.), c(0., 0.), c(h, 0.)]));
        assert!((s.prob_zero(0).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_circuit_is_identity() {
        let s0 = StateVector::from_amplitudes(vec![c(0.3, 0.1), c(-0.2, 0.5), c(0.0, 0.7), c(0.1, 0.0)])
            .unwrap();
        let mut s = s0.clone();
        s.run(&Circuit::new(2)).unwrap();
        assert_eq!(s, s0);
    }

    #[test]
    fn prob_zero_encoding() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply(&Gate::Ry { target: 0, angle: 2.0 * 0.25f64.sqrt().acos() }).unwrap();
        assert!((s.prob_zero(0).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(StateVector::zero(3).unwrap().prob_zero(2).unwrap(), 1.0);
    }

    #[test]
    fn errors() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(matches!(
            s.apply(&Gate::Rx { target: 2, angle: 0.1 }),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert!(matches!(s.prob_zero(5), Err(Error::QubitOutOfRange { .. })));
        assert!(matches!(
            s.run(&Circuit::new(3)),
            Err(Error::QubitCountMismatch { .. })
        ));
    }

    #[test]
    fn marginals_match_prob_zero() {
        let mut s = StateVector::zero(3).unwrap();
        for (q, a) in [(0, 0.3), (1, 1.1), (2, 2.0)] {
            s.apply(&Gate::Ry { target: q, angle: a }).unwrap();
        }
        s.apply(&Gate::Cnot { control: 0, target: 2 }).unwrap();
        let m = s.marginals_zero();
        for q in 0..3 {
            assert!((m[q] - s.prob_zero(q).unwrap()).abs() < 1e-14);
        }
    }
}
