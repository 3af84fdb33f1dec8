use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::rng::SeededRng;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    /// `out += x^T M` for a row vector `x` of length `rows`.
    pub fn accumulate_vec_mul(&self, x: &[f64], out: &mut [f64]) {
        for (r, &xr) in x.iter().enumerate() {
            if xr == 0.0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(self.row(r)) {
                *o += xr * m;
            }
        }
    }

    /// `out += M y` for a column vector `y` of length `cols`.
    pub fn accumulate_mul_vec(&self, y: &[f64], out: &mut [f64]) {
        for (r, o) in out.iter_mut().enumerate() {
            *o += math::dot(self.row(r), y);
        }
    }

    /// `M += x y^T`.
    pub fn accumulate_outer(&mut self, x: &[f64], y: &[f64]) {
        for (r, &xr) in x.iter().enumerate() {
            if xr == 0.0 {
                continue;
            }
            for (m, &yc) in self.row_mut(r).iter_mut().zip(y) {
                *m += xr * yc;
            }
        }
    }

    fn fill_uniform(&mut self, rng: &mut SeededRng, limit: f64) {
        for v in &mut self.data {
            *v = rng.uniform(-limit, limit);
        }
    }
}

/// Network sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Dims {
    pub vocab: usize,
    pub embed: usize,
    pub hidden: usize,
    /// `None` for the plain BiLSTM.
    pub attention: Option<usize>,
}

/// Gate column blocks, each `hidden` wide, in this order.
pub const GATE_ORDER: [&str; 4] = ["input", "forget", "output", "candidate"];

/// One LSTM direction. Columns of the weight matrices and entries of the
/// bias are grouped by gate following [`GATE_ORDER`].
#[derive(Debug, Clone, PartialEq)]
pub struct LstmParams {
    /// `embed x 4*hidden`.
    pub w_input: Matrix,
    /// `hidden x 4*hidden`.
    pub w_hidden: Matrix,
    /// `4*hidden`.
    pub bias: Vec<f64>,
}

impl LstmParams {
    pub fn zeros(embed: usize, hidden: usize) -> Self {
        LstmParams {
            w_input: Matrix::zeros(embed, 4 * hidden),
            w_hidden: Matrix::zeros(hidden, 4 * hidden),
            bias: vec![0.0; 4 * hidden],
        }
    }

    pub fn hidden(&self) -> usize {
        self.w_hidden.rows
    }
}

/// Additive attention with a learned query folded into the scorer:
/// `score_t = v . tanh(W^T s_t + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionParams {
    /// `2*hidden x attention`.
    pub w: Matrix,
    pub b: Vec<f64>,
    pub v: Vec<f64>,
}

/// Linear softmax head over a `2*hidden` summary.
#[derive(Debug, Clone, PartialEq)]
pub struct HeadParams {
    /// `2*hidden x 2`.
    pub w: Matrix,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeuralNetParams {
    /// `vocab x embed`; row 0 is padding, row 1 unknown.
    pub embedding: Matrix,
    pub forward: LstmParams,
    pub backward: LstmParams,
    pub attention: Option<AttentionParams>,
    pub head: HeadParams,
}

impl NeuralNetParams {
    pub fn zeros(dims: Dims) -> Self {
        let h2 = 2 * dims.hidden;
        NeuralNetParams {
            embedding: Matrix::zeros(dims.vocab, dims.embed),
            forward: LstmParams::zeros(dims.embed, dims.hidden),
            backward: LstmParams::zeros(dims.embed, dims.hidden),
            attention: dims.attention.map(|a| AttentionParams {
                w: Matrix::zeros(h2, a),
                b: vec![0.0; a],
                v: vec![0.0; a],
            }),
            head: HeadParams {
                w: Matrix::zeros(h2, 2),
                b: vec![0.0; 2],
            },
        }
    }

    /// Seeded initialization, drawing in block order: embedding
    /// `U(-0.05, 0.05)`; LSTM input and recurrent weights Xavier-uniform
    /// per gate (`fan_in + hidden`); attention `W` and `v`, head `W`
    /// Xavier-uniform; forget-gate biases 1; other biases 0.
    pub fn init(dims: Dims, seed: u64) -> Self {
        let mut rng = SeededRng::new(seed);
        let mut p = Self::zeros(dims);
        let xavier = |fan_in: usize, fan_out: usize| math::sqrt(6.0 / (fan_in + fan_out) as f64);
        let h = dims.hidden;
        p.embedding.fill_uniform(&mut rng, 0.05);
        for dir in [&mut p.forward, &mut p.backward] {
            dir.w_input.fill_uniform(&mut rng, xavier(dims.embed, h));
            dir.w_hidden.fill_uniform(&mut rng, xavier(h, h));
            for v in &mut dir.bias[h..2 * h] {
                *v = 1.0;
            }
        }
        if let Some(att) = p.attention.as_mut() {
            let a = att.b.len();
            att.w.fill_uniform(&mut rng, xavier(2 * h, a));
            let lim = xavier(a, 1);
            for v in &mut att.v {
                *v = rng.uniform(-lim, lim);
            }
        }
        p.head.w.fill_uniform(&mut rng, xavier(2 * h, 2));
        p
    }

    pub fn dims(&self) -> Dims {
        Dims {
            vocab: self.embedding.rows,
            embed: self.embedding.cols,
            hidden: self.forward.hidden(),
            attention: self.attention.as_ref().map(|a| a.b.len()),
        }
    }

    pub fn use_attention(&self) -> bool {
        self.attention.is_some()
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros(self.dims())
    }

    /// Parameter blocks in their fixed serialization order.
    pub fn blocks(&self) -> Vec<(&'static str, &[f64])> {
        let mut out: Vec<(&'static str, &[f64])> = vec![
            ("embedding", &self.embedding.data),
            ("forward.w_input", &self.forward.w_input.data),
            ("forward.w_hidden", &self.forward.w_hidden.data),
            ("forward.bias", &self.forward.bias),
            ("backward.w_input", &self.backward.w_input.data),
            ("backward.w_hidden", &self.backward.w_hidden.data),
            ("backward.bias", &self.backward.bias),
        ];
        if let Some(a) = &self.attention {
            out.push(("attention.w", &a.w.data));
            out.push(("attention.b", &a.b));
            out.push(("attention.v", &a.v));
        }
        out.push(("head.w", &self.head.w.data));
        out.push(("head.b", &self.head.b));
        out
    }

    pub fn blocks_mut(&mut self) -> Vec<(&'static str, &mut [f64])> {
        let mut out: Vec<(&'static str, &mut [f64])> = vec![
            ("embedding", &mut self.embedding.data),
            ("forward.w_input", &mut self.forward.w_input.data),
            ("forward.w_hidden", &mut self.forward.w_hidden.data),
            ("forward.bias", &mut self.forward.bias),
            ("backward.w_input", &mut self.backward.w_input.data),
            ("backward.w_hidden", &mut self.backward.w_hidden.data),
            ("backward.bias", &mut self.backward.bias),
        ];
        if let Some(a) = &mut self.attention {
            out.push(("attention.w", &mut a.w.data));
            out.push(("attention.b", &mut a.b));
            out.push(("attention.v", &mut a.v));
        }
        out.push(("head.w", &mut self.head.w.data));
        out.push(("head.b", &mut self.head.b));
        out
    }

    /// Name of the first block holding a non-finite value.
    pub fn first_non_finite(&self) -> Option<&'static str> {
        self.blocks()
            .into_iter()
            .find(|(_, b)| b.iter().any(|v| !v.is_finite()))
            .map(|(n, _)| n)
    }

    pub fn scale(&mut self, k: f64) {
        for (_, b) in self.blocks_mut() {
            b.iter_mut().for_each(|v| *v *= k);
        }
    }

    pub fn num_parameters(&self) -> usize {
        self.blocks().iter().map(|(_, b)| b.len()).sum()
    }

    /// Block names, for reports.
    pub fn block_names(&self) -> Vec<String> {
        self.blocks().iter().map(|(n, _)| String::from(*n)).collect()
    }
}
