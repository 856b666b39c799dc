//! Hardware-efficient VQE optimized with Rotoselect.
//!
//! Ansatz: `depth` blocks, each a column of single-qubit rotations (one per
//! qubit, axis chosen per gate) followed by a CNOT chain `m → m+1`. The
//! register starts in `|0…0⟩`.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{particle_number, GroundStateResult, SolverConfig};
use crate::error::{Error, Result};
use crate::hamiltonian::QubitHamiltonian;
use crate::simulator::{Circuit, CompiledOperator, Gate, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn gate(self, target: usize, angle: f64) -> Gate {
        match self {
            Axis::X => Gate::Rx { target, angle },
            Axis::Y => Gate::Ry { target, angle },
            Axis::Z => Gate::Rz { target, angle },
        }
    }
}

/// Per-gate axes and angles, indexed `block · n_qubits + qubit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqeState {
    n_qubits: usize,
    depth: usize,
    pub axes: Vec<Axis>,
    pub angles: Vec<f64>,
}

impl VqeState {
    /// All-`Rx` layout with angles drawn uniformly from `[0, 0.1)`.
    pub fn initial(n_qubits: usize, depth: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = n_qubits * depth;
        Self {
            n_qubits,
            depth,
            axes: vec![Axis::X; n],
            angles: (0..n).map(|_| rng.random_range(0.0..0.1)).collect(),
        }
    }

    pub fn new(n_qubits: usize, depth: usize, axes: Vec<Axis>, angles: Vec<f64>) -> Result<Self> {
        let n = n_qubits * depth;
        if axes.len() != n || angles.len() != n {
            return Err(Error::ParameterLength {
                expected: n,
                found: axes.len().min(angles.len()),
            });
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidArgument("non-finite VQE angle".into()));
        }
        Ok(Self {
            n_qubits,
            depth,
            axes,
            angles,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn n_gates(&self) -> usize {
        self.angles.len()
    }

    /// Ops in circuit order; rotation `k` is tagged `Some(k)`.
    fn ops(&self) -> Vec<(Option<usize>, Gate)> {
        let n = self.n_qubits;
        let mut ops = Vec::with_capacity(self.depth * (2 * n));
        for b in 0..self.depth {
            for q in 0..n {
                let k = b * n + q;
                ops.push((Some(k), self.axes[k].gate(q, self.angles[k])));
            }
            for q in 0..n.saturating_sub(1) {
                ops.push((None, Gate::Cnot { control: q, target: q + 1 }));
            }
        }
        ops
    }

    pub fn circuit(&self) -> Circuit {
        let mut c = Circuit::new(self.n_qubits);
        for (_, g) in self.ops() {
            c.push(g).expect("layout indices are in range");
        }
        c
    }

    pub fn prepare(&self) -> StateVector {
        let mut s = StateVector::zero(self.n_qubits).expect("qubit count checked by caller");
        for (_, g) in self.ops() {
            s.apply_unchecked(&g);
        }
        s
    }

    pub fn energy(&self, op: &CompiledOperator) -> f64 {
        op.expectation(self.prepare().amplitudes())
    }
}

/// `E(φ) = a·cos φ + b·sin φ + c` from samples at `0, +π/2, −π/2`.
/// Returns `(argmin, min)`; `None` argmin when the landscape is flat.
fn sinusoid_minimum(e0: f64, e_plus: f64, e_minus: f64) -> (Option<f64>, f64) {
    let c = 0.5 * (e_plus + e_minus);
    let b = 0.5 * (e_plus - e_minus);
    let a = e0 - c;
    let amp = a.hypot(b);
    if amp == 0.0 {
        return (None, c);
    }
    let phi = b.atan2(a) + PI;
    (Some(wrap_angle(phi)), c - amp)
}

fn wrap_angle(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    p
}

/// One pass over every rotation in circuit order, committing the best
/// axis/angle for each before moving on. Returns the post-sweep energy.
pub fn rotoselect_sweep(state: &mut VqeState, op: &CompiledOperator) -> Result<f64> {
    if op.n_qubits() != state.n_qubits {
        return Err(Error::QubitCountMismatch {
            expected: state.n_qubits,
            found: op.n_qubits(),
        });
    }
    let mut prefix = StateVector::zero(state.n_qubits)?;
    let n_ops = state.ops().len();
    for pos in 0..n_ops {
        let ops = state.ops();
        let (tag, gate) = ops[pos];
        let Some(k) = tag else {
            prefix.apply_unchecked(&gate);
            continue;
        };
        let target = gate.target();
        let suffix = &ops[pos + 1..];
        let eval = |g: Option<Gate>| {
            let mut s = prefix.clone();
            if let Some(g) = g {
                s.apply_unchecked(&g);
            }
            for (_, g) in suffix {
                s.apply_unchecked(g);
            }
            op.expectation(s.amplitudes())
        };

        // R(0) = I for every axis, so the φ = 0 sample is shared
        let e0 = eval(None);
        let mut best: Option<(Axis, Option<f64>, f64)> = None;
        for axis in Axis::ALL {
            let ep = eval(Some(axis.gate(target, FRAC_PI_2)));
            let em = eval(Some(axis.gate(target, -FRAC_PI_2)));
            let (phi, min) = sinusoid_minimum(e0, ep, em);
            if best.is_none_or(|(_, _, m)| min < m) {
                best = Some((axis, phi, min));
            }
        }
        let (axis, phi, _) = best.expect("three axes evaluated");
        state.axes[k] = axis;
        if let Some(phi) = phi {
            state.angles[k] = phi;
        }
        prefix.apply_unchecked(&axis.gate(target, state.angles[k]));
    }
    Ok(op.expectation(prefix.amplitudes()))
}

pub fn solve_vqe(h: &QubitHamiltonian, cfg: &SolverConfig) -> Result<GroundStateResult> {
    solve_vqe_compiled(&h.compile(), cfg)
}

/// Rotoselect sweeps until the sweep-to-sweep change drops below the
/// threshold or `max_sweeps` is reached.
pub fn solve_vqe_compiled(op: &CompiledOperator, cfg: &SolverConfig) -> Result<GroundStateResult> {
    cfg.validate()?;
    let mut state = VqeState::initial(op.n_qubits(), cfg.vqe_depth, cfg.seed);
    let mut prev = state.energy(op);
    let mut best = (prev, state.clone());
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < cfg.max_sweeps {
        let e = rotoselect_sweep(&mut state, op)?;
        sweeps += 1;
        if e < best.0 {
            best = (e, state.clone());
        }
        if (e - prev).abs() < cfg.convergence_threshold {
            converged = true;
            break;
        }
        prev = e;
    }
    let final_state = best.1.prepare();
    Ok(GroundStateResult {
        energy: best.0,
        iterations: sweeps,
        converged,
        electrons: particle_number(&final_state),
        state: Some(final_state),
    })
}
