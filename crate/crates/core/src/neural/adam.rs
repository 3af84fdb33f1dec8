use alloc::vec;
use alloc::vec::Vec;

use super::params::NeuralNetParams;
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// First and second moment estimates, one vector per parameter block.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub m: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    pub t: u64,
}

impl AdamState {
    pub fn new(params: &NeuralNetParams) -> Self {
        let m: Vec<Vec<f64>> = params.blocks().iter().map(|(_, b)| vec![0.0; b.len()]).collect();
        AdamState {
            v: m.clone(),
            m,
            t: 0,
        }
    }
}

/// One bias-corrected Adam update.
pub fn adam_step(params: &mut NeuralNetParams, grads: &NeuralNetParams, state: &mut AdamState, config: &AdamConfig) {
    state.t += 1;
    let t = state.t as f64;
    let c1 = 1.0 - libm::pow(config.beta1, t);
    let c2 = 1.0 - libm::pow(config.beta2, t);
    let grad_blocks = grads.blocks();
    for (bi, (_, block)) in params.blocks_mut().into_iter().enumerate() {
        let g = grad_blocks[bi].1;
        let m = &mut state.m[bi];
        let v = &mut state.v[bi];
        for j in 0..block.len() {
            m[j] = config.beta1 * m[j] + (1.0 - config.beta1) * g[j];
            v[j] = config.beta2 * v[j] + (1.0 - config.beta2) * g[j] * g[j];
            let m_hat = m[j] / c1;
            let v_hat = v[j] / c2;
            block[j] -= config.learning_rate * m_hat / (math::sqrt(v_hat) + config.epsilon);
        }
    }
}
