use alloc::vec::Vec;

use super::network::{batch_loss, loss_and_gradients, Example};
use super::params::NeuralNetParams;
use crate::error::Result;
use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheckConfig {
    pub h: f64,
    pub tolerance: f64,
    /// Coordinates sampled per block; smaller blocks are checked in full.
    pub samples_per_block: usize,
    pub seed: u64,
}

impl Default for GradCheckConfig {
    fn default() -> Self {
        GradCheckConfig {
            h: 1e-5,
            tolerance: 1e-4,
            samples_per_block: 20,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockCheck {
    pub name: &'static str,
    pub coordinates: usize,
    pub max_rel_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    pub blocks: Vec<BlockCheck>,
    pub max_rel_error: f64,
    pub passed: bool,
}

/// `|a - n| / max(|a|, |n|, 1e-12)`.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-12)
}

/// Compares analytic gradients with central differences on sampled
/// coordinates of every parameter block.
pub fn gradient_check(params: &NeuralNetParams, batch: &[Example], config: &GradCheckConfig) -> Result<GradCheckReport> {
    let (_, grads) = loss_and_gradients(params, batch)?;
    let grad_blocks = grads.blocks();
    let mut rng = SeededRng::new(config.seed);
    let mut probe = params.clone();
    let mut blocks = Vec::new();
    for (bi, (name, g)) in grad_blocks.iter().enumerate() {
        let len = g.len();
        let coords: Vec<usize> = if len <= config.samples_per_block {
            (0..len).collect()
        } else {
            (0..config.samples_per_block).map(|_| rng.below(len as u64) as usize).collect()
        };
        let mut worst: f64 = 0.0;
        for &j in &coords {
            let original = probe.blocks()[bi].1[j];
            probe.blocks_mut()[bi].1[j] = original + config.h;
            let plus = batch_loss(&probe, batch)?;
            probe.blocks_mut()[bi].1[j] = original - config.h;
            let minus = batch_loss(&probe, batch)?;
            probe.blocks_mut()[bi].1[j] = original;
            let numeric = (plus - minus) / (2.0 * config.h);
            worst = worst.max(relative_error(g[j], numeric));
        }
        blocks.push(BlockCheck {
            name,
            coordinates: coords.len(),
            max_rel_error: worst,
        });
    }
    let max_rel_error = blocks.iter().map(|b| b.max_rel_error).fold(0.0, f64::max);
    Ok(GradCheckReport {
        blocks,
        max_rel_error,
        passed: max_rel_error < config.tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::super::params::{Dims, Matrix};
    use super::*;
    use crate::corpus::Label;
    use alloc::vec;

    fn batch() -> Vec<Example> {
        vec![
            Example {
                ids: vec![2, 5, 7, 3, 0],
                valid_len: 4,
                label: Label::Bullying,
            },
            Example {
                ids: vec![9, 4, 4, 6, 8],
                valid_len: 5,
                label: Label::NonBullying,
            },
        ]
    }

    fn dims(attention: Option<usize>) -> Dims {
        Dims {
            vocab: 10,
            embed: 4,
            hidden: 3,
            attention,
        }
    }

    #[test]
    fn full_network_with_attention() {
        let p = NeuralNetParams::init(dims(Some(3)), 42);
        let r = gradient_check(&p, &batch(), &GradCheckConfig::default()).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn plain_bilstm() {
        let p = NeuralNetParams::init(dims(None), 7);
        let r = gradient_check(&p, &batch(), &GradCheckConfig::default()).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn head_only_is_very_accurate() {
        let mut p = NeuralNetParams::init(dims(None), 3);
        p.head.w = Matrix {
            rows: 6,
            cols: 2,
            data: vec![0.3, -0.2, 0.1, 0.5, -0.4, 0.2, 0.7, -0.1, 0.05, 0.3, -0.6, 0.4],
        };
        let r = gradient_check(&p, &batch(), &GradCheckConfig::default()).unwrap();
        let head = r.blocks.iter().filter(|b| b.name.starts_with("head")).map(|b| b.max_rel_error).fold(0.0, f64::max);
        assert!(head < 1e-7, "{head}");
    }

    #[test]
    fn large_step_inflates_error() {
        let p = NeuralNetParams::init(dims(Some(3)), 42);
        let fine = gradient_check(&p, &batch(), &GradCheckConfig::default()).unwrap();
        let coarse = gradient_check(&p, &batch(), &GradCheckConfig { h: 1e-1, ..Default::default() }).unwrap();
        assert!(coarse.max_rel_error > fine.max_rel_error);
    }
}
