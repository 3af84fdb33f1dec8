//! Forward pass, loss and hand-derived backpropagation through time.

use alloc::vec;
use alloc::vec::Vec;

use super::params::{AttentionParams, LstmParams, Matrix, NeuralNetParams};
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::math;

/// One encoded training or evaluation example.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub ids: Vec<usize>,
    pub valid_len: usize,
    pub label: Label,
}

/// Pre-activations `b + x W_in + h W_h` in gate order, then activated in place.
fn gates(x: &[f64], h_prev: &[f64], p: &LstmParams) -> Vec<f64> {
    let h = p.hidden();
    let mut z = p.bias.clone();
    p.w_input.accumulate_vec_mul(x, &mut z);
    p.w_hidden.accumulate_vec_mul(h_prev, &mut z);
    for v in &mut z[..3 * h] {
        *v = math::sigmoid(*v);
    }
    for v in &mut z[3 * h..] {
        *v = math::tanh(*v);
    }
    z
}

fn cell_update(a: &[f64], c_prev: &[f64], h_out: &mut [f64], c_out: &mut [f64]) {
    let h = c_prev.len();
    for k in 0..h {
        let (i, f, o, g) = (a[k], a[h + k], a[2 * h + k], a[3 * h + k]);
        c_out[k] = f * c_prev[k] + i * g;
        h_out[k] = o * math::tanh(c_out[k]);
    }
}

/// One LSTM step: `i, f, o = sigmoid(.)`, `g = tanh(.)`,
/// `c = f * c_prev + i * g`, `h = o * tanh(c)`.
pub fn lstm_cell(x: &[f64], h_prev: &[f64], c_prev: &[f64], p: &LstmParams) -> (Vec<f64>, Vec<f64>) {
    let a = gates(x, h_prev, p);
    let mut h = vec![0.0; c_prev.len()];
    let mut c = vec![0.0; c_prev.len()];
    cell_update(&a, c_prev, &mut h, &mut c);
    (h, c)
}

/// Activations of one direction, indexed by processing step.
#[derive(Debug, Clone)]
struct DirCache {
    gates: Vec<f64>,
    c: Vec<f64>,
    h: Vec<f64>,
}

fn run_direction(p: &LstmParams, embedding: &Matrix, step_ids: &[usize]) -> DirCache {
    let hd = p.hidden();
    let n = step_ids.len();
    let mut cache = DirCache {
        gates: Vec::with_capacity(n * 4 * hd),
        c: vec![0.0; n * hd],
        h: vec![0.0; n * hd],
    };
    let zeros = vec![0.0; hd];
    for (s, &id) in step_ids.iter().enumerate() {
        let (h_prev, c_prev) = if s == 0 {
            (zeros.clone(), zeros.clone())
        } else {
            (cache.h[(s - 1) * hd..s * hd].to_vec(), cache.c[(s - 1) * hd..s * hd].to_vec())
        };
        let a = gates(embedding.row(id), &h_prev, p);
        cell_update(&a, &c_prev, &mut cache.h[s * hd..(s + 1) * hd], &mut cache.c[s * hd..(s + 1) * hd]);
        cache.gates.extend_from_slice(&a);
    }
    cache
}

struct AttentionCache {
    /// `tanh(W^T s_t + b)` per valid position.
    u: Vec<f64>,
    alpha: Vec<f64>,
}

struct ForwardCache {
    ids: Vec<usize>,
    fwd: DirCache,
    bwd: DirCache,
    /// `valid_len x 2H`.
    states: Matrix,
    attention: Option<AttentionCache>,
    summary: Vec<f64>,
    logits: [f64; 2],
}

fn attention_scores(states: &Matrix, len: usize, p: &AttentionParams) -> (Vec<f64>, Vec<f64>) {
    let a = p.b.len();
    let mut u = Vec::with_capacity(len * a);
    let mut scores = Vec::with_capacity(len);
    for t in 0..len {
        let mut pre = p.b.clone();
        p.w.accumulate_vec_mul(states.row(t), &mut pre);
        pre.iter_mut().for_each(|v| *v = math::tanh(*v));
        scores.push(math::dot(&p.v, &pre));
        u.extend_from_slice(&pre);
    }
    (u, scores)
}

fn weighted_sum(states: &Matrix, alpha: &[f64]) -> Vec<f64> {
    let mut ctx = vec![0.0; states.cols];
    for (t, &w) in alpha.iter().enumerate() {
        for (c, &s) in ctx.iter_mut().zip(states.row(t)) {
            *c += w * s;
        }
    }
    ctx
}

fn forward_cached(ids: &[usize], valid_len: usize, params: &NeuralNetParams) -> Result<ForwardCache> {
    let len = valid_len.min(ids.len());
    let hd = params.forward.hidden();
    let ids: Vec<usize> = ids[..len].to_vec();
    let reversed: Vec<usize> = ids.iter().rev().copied().collect();
    let fwd = run_direction(&params.forward, &params.embedding, &ids);
    let bwd = run_direction(&params.backward, &params.embedding, &reversed);
    let mut states = Matrix::zeros(len, 2 * hd);
    for t in 0..len {
        let row = states.row_mut(t);
        row[..hd].copy_from_slice(&fwd.h[t * hd..(t + 1) * hd]);
        let s = len - 1 - t;
        row[hd..].copy_from_slice(&bwd.h[s * hd..(s + 1) * hd]);
    }
    let (summary, attention) = match &params.attention {
        Some(p) => {
            if len == 0 {
                return Err(Error::EmptySequence);
            }
            let (u, scores) = attention_scores(&states, len, p);
            let mut alpha = vec![0.0; len];
            math::softmax_into(&scores, &mut alpha);
            (weighted_sum(&states, &alpha), Some(AttentionCache { u, alpha }))
        }
        None => {
            let mut summary = vec![0.0; 2 * hd];
            if len > 0 {
                summary[..hd].copy_from_slice(&states.row(len - 1)[..hd]);
                summary[hd..].copy_from_slice(&states.row(0)[hd..]);
            }
            (summary, None)
        }
    };
    let mut logits = [params.head.b[0], params.head.b[1]];
    params.head.w.accumulate_vec_mul(&summary, &mut logits);
    Ok(ForwardCache {
        ids,
        fwd,
        bwd,
        states,
        attention,
        summary,
        logits,
    })
}

/// BiLSTM outputs `concat(h_fwd_t, h_bwd_t)` for every position of `ids`;
/// positions at or beyond `valid_len` are zero.
pub fn bilstm_forward(ids: &[usize], valid_len: usize, params: &NeuralNetParams) -> Matrix {
    let len = valid_len.min(ids.len());
    let hd = params.forward.hidden();
    let reversed: Vec<usize> = ids[..len].iter().rev().copied().collect();
    let fwd = run_direction(&params.forward, &params.embedding, &ids[..len]);
    let bwd = run_direction(&params.backward, &params.embedding, &reversed);
    let mut out = Matrix::zeros(ids.len(), 2 * hd);
    for t in 0..len {
        let row = out.row_mut(t);
        row[..hd].copy_from_slice(&fwd.h[t * hd..(t + 1) * hd]);
        let s = len - 1 - t;
        row[hd..].copy_from_slice(&bwd.h[s * hd..(s + 1) * hd]);
    }
    out
}

/// Additive attention over the first `valid_len` rows of `states`.
/// Returns the context vector and one weight per row (zero past
/// `valid_len`).
pub fn attention(states: &Matrix, valid_len: usize, params: &AttentionParams) -> Result<(Vec<f64>, Vec<f64>)> {
    let len = valid_len.min(states.rows);
    if len == 0 {
        return Err(Error::EmptySequence);
    }
    let (_, scores) = attention_scores(states, len, params);
    let mut weights = vec![0.0; states.rows];
    math::softmax_into(&scores, &mut weights[..len]);
    let ctx = weighted_sum(states, &weights[..len]);
    Ok((ctx, weights))
}

/// Class logits `[bullying, non-bullying]`. With attention an empty sequence
/// is an error; the plain model maps it to the head bias.
pub fn forward_classify(ids: &[usize], valid_len: usize, params: &NeuralNetParams) -> Result<[f64; 2]> {
    Ok(forward_cached(ids, valid_len, params)?.logits)
}

/// `-log softmax(logits)[label]`, stabilized.
pub fn cross_entropy(logits: &[f64; 2], label: Label) -> f64 {
    math::log_sum_exp(logits) - logits[label.id()]
}

pub fn probabilities(logits: &[f64; 2]) -> [f64; 2] {
    let mut p = [0.0; 2];
    math::softmax_into(logits, &mut p);
    p
}

fn backward_direction(
    p: &LstmParams,
    g: &mut LstmParams,
    embedding: &Matrix,
    embedding_grad: &mut Matrix,
    step_ids: &[usize],
    cache: &DirCache,
    dh_ext: &[f64],
) {
    let hd = p.hidden();
    let mut dh_next = vec![0.0; hd];
    let mut dc_next = vec![0.0; hd];
    let zeros = vec![0.0; hd];
    let mut dz = vec![0.0; 4 * hd];
    for s in (0..step_ids.len()).rev() {
        let a = &cache.gates[s * 4 * hd..(s + 1) * 4 * hd];
        let c = &cache.c[s * hd..(s + 1) * hd];
        let (c_prev, h_prev) = if s == 0 {
            (&zeros[..], &zeros[..])
        } else {
            (&cache.c[(s - 1) * hd..s * hd], &cache.h[(s - 1) * hd..s * hd])
        };
        for k in 0..hd {
            let (i, f, o, gg) = (a[k], a[hd + k], a[2 * hd + k], a[3 * hd + k]);
            let dh = dh_ext[s * hd + k] + dh_next[k];
            let tc = math::tanh(c[k]);
            let dc = dc_next[k] + dh * o * (1.0 - tc * tc);
            dz[k] = dc * gg * i * (1.0 - i);
            dz[hd + k] = dc * c_prev[k] * f * (1.0 - f);
            dz[2 * hd + k] = dh * tc * o * (1.0 - o);
            dz[3 * hd + k] = dc * i * (1.0 - gg * gg);
            dc_next[k] = dc * f;
        }
        let x = embedding.row(step_ids[s]);
        g.w_input.accumulate_outer(x, &dz);
        g.w_hidden.accumulate_outer(h_prev, &dz);
        for (b, d) in g.bias.iter_mut().zip(&dz) {
            *b += d;
        }
        p.w_input.accumulate_mul_vec(&dz, embedding_grad.row_mut(step_ids[s]));
        dh_next.iter_mut().for_each(|v| *v = 0.0);
        p.w_hidden.accumulate_mul_vec(&dz, &mut dh_next);
    }
}

/// Adds `scale * d loss / d params` for one example into `grads` and
/// returns the example's loss.
fn accumulate_example(params: &NeuralNetParams, example: &Example, scale: f64, grads: &mut NeuralNetParams) -> Result<f64> {
    let cache = forward_cached(&example.ids, example.valid_len, params)?;
    let loss = cross_entropy(&cache.logits, example.label);
    let probs = probabilities(&cache.logits);
    let mut dlogits = [probs[0] * scale, probs[1] * scale];
    dlogits[example.label.id()] -= scale;

    grads.head.w.accumulate_outer(&cache.summary, &dlogits);
    grads.head.b[0] += dlogits[0];
    grads.head.b[1] += dlogits[1];
    let mut dsummary = vec![0.0; cache.summary.len()];
    params.head.w.accumulate_mul_vec(&dlogits, &mut dsummary);

    let len = cache.ids.len();
    let hd = params.forward.hidden();
    let mut ds = Matrix::zeros(len, 2 * hd);
    match (&params.attention, &cache.attention, grads.attention.as_mut()) {
        (Some(p), Some(ac), Some(ga)) => {
            let a = p.b.len();
            let dalpha: Vec<f64> = (0..len).map(|t| math::dot(&dsummary, cache.states.row(t))).collect();
            let mean: f64 = ac.alpha.iter().zip(&dalpha).map(|(x, y)| x * y).sum();
            let mut dpre = vec![0.0; a];
            for t in 0..len {
                let w = ac.alpha[t];
                for (d, &s) in ds.row_mut(t).iter_mut().zip(&dsummary) {
                    *d += w * s;
                }
                let de = w * (dalpha[t] - mean);
                let u = &ac.u[t * a..(t + 1) * a];
                for j in 0..a {
                    ga.v[j] += de * u[j];
                    dpre[j] = de * p.v[j] * (1.0 - u[j] * u[j]);
                    ga.b[j] += dpre[j];
                }
                ga.w.accumulate_outer(cache.states.row(t), &dpre);
                p.w.accumulate_mul_vec(&dpre, ds.row_mut(t));
            }
        }
        _ => {
            if len > 0 {
                for k in 0..hd {
                    ds.row_mut(len - 1)[k] += dsummary[k];
                    ds.row_mut(0)[hd + k] += dsummary[hd + k];
                }
            }
        }
    }

    let mut dh_fwd = vec![0.0; len * hd];
    let mut dh_bwd = vec![0.0; len * hd];
    for t in 0..len {
        dh_fwd[t * hd..(t + 1) * hd].copy_from_slice(&ds.row(t)[..hd]);
        let s = len - 1 - t;
        dh_bwd[s * hd..(s + 1) * hd].copy_from_slice(&ds.row(t)[hd..]);
    }
    let reversed: Vec<usize> = cache.ids.iter().rev().copied().collect();
    backward_direction(
        &params.forward,
        &mut grads.forward,
        &params.embedding,
        &mut grads.embedding,
        &cache.ids,
        &cache.fwd,
        &dh_fwd,
    );
    backward_direction(
        &params.backward,
        &mut grads.backward,
        &params.embedding,
        &mut grads.embedding,
        &reversed,
        &cache.bwd,
        &dh_bwd,
    );
    Ok(loss)
}

/// Mean cross-entropy over the batch and its exact gradient.
pub fn loss_and_gradients(params: &NeuralNetParams, batch: &[Example]) -> Result<(f64, NeuralNetParams)> {
    if batch.is_empty() {
        return Err(Error::EmptyInput("gradient of an empty batch"));
    }
    let mut grads = params.zeros_like();
    let scale = 1.0 / batch.len() as f64;
    let mut total = 0.0;
    for ex in batch {
        total += accumulate_example(params, ex, scale, &mut grads)?;
    }
    if let Some(block) = grads.first_non_finite() {
        return Err(Error::NonFiniteGradient(block));
    }
    Ok((total * scale, grads))
}

/// Mean cross-entropy over the batch.
pub fn batch_loss(params: &NeuralNetParams, batch: &[Example]) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::EmptyInput("loss of an empty batch"));
    }
    let mut total = 0.0;
    for ex in batch {
        total += cross_entropy(&forward_classify(&ex.ids, ex.valid_len, params)?, ex.label);
    }
    Ok(total / batch.len() as f64)
}
