use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamParams {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamParams {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

impl AdamParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.learning_rate > 0.0
            && (0.0..1.0).contains(&self.beta1)
            && (0.0..1.0).contains(&self.beta2)
            && self.epsilon > 0.0;
        if !ok {
            return Err(Error::InvalidArgument(format!("invalid Adam parameters {self:?}")));
        }
        Ok(())
    }
}

/// Moment accumulators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub step: u64,
}

impl AdamState {
    pub fn new(n: usize) -> Self {
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
            step: 0,
        }
    }
}

/// One bias-corrected Adam step, in place.
pub fn adam_update(theta: &mut [f64], grad: &[f64], state: &mut AdamState, p: &AdamParams) -> Result<()> {
    if grad.len() != theta.len() || state.m.len() != theta.len() || state.v.len() != theta.len() {
        return Err(Error::ParameterLength {
            expected: theta.len(),
            found: grad.len().min(state.m.len()),
        });
    }
    state.step += 1;
    let t = state.step as i32;
    let c1 = 1.0 - p.beta1.powi(t);
    let c2 = 1.0 - p.beta2.powi(t);
    for k in 0..theta.len() {
        state.m[k] = p.beta1 * state.m[k] + (1.0 - p.beta1) * grad[k];
        state.v[k] = p.beta2 * state.v[k] + (1.0 - p.beta2) * grad[k] * grad[k];
        let m_hat = state.m[k] / c1;
        let v_hat = state.v[k] / c2;
        theta[k] -= p.learning_rate * m_hat / (v_hat.sqrt() + p.epsilon);
    }
    Ok(())
}
