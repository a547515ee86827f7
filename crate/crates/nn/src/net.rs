//! The network itself: affine + tanh through the hidden layers, affine at
//! the output (the predicted coefficients are unbounded, so no squashing
//! there), Glorot-uniform weight init, Adam with bias correction.

use crate::{NnError, Result};
use axphy_core::rng::SeededRng;

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const EPS: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct Layer {
    /// Row-major out_dim x in_dim.
    pub w: Vec<f64>,
    pub b: Vec<f64>,
    pub in_dim: usize,
    pub out_dim: usize,
}

#[derive(Debug, Clone, Default)]
struct Moments {
    mw: Vec<f64>,
    vw: Vec<f64>,
    mb: Vec<f64>,
    vb: Vec<f64>,
}

/// Per-parameter loss gradients, shaped like the layers.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub w: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
}

impl Gradients {
    pub fn zeros_like(net: &DenseNet) -> Self {
        Self {
            w: net.layers.iter().map(|l| vec![0.0; l.w.len()]).collect(),
            b: net.layers.iter().map(|l| vec![0.0; l.b.len()]).collect(),
        }
    }

    pub fn accumulate(&mut self, other: &Gradients) {
        for (a, b) in self.w.iter_mut().zip(&other.w) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        for (a, b) in self.b.iter_mut().zip(&other.b) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    pub fn scale(&mut self, s: f64) {
        for a in self.w.iter_mut().chain(self.b.iter_mut()) {
            for x in a.iter_mut() {
                *x *= s;
            }
        }
    }
}

/// Forward activations kept for the backward pass.
pub struct ForwardCache {
    /// Post-activation outputs of every layer; index 0 is layer 0's output.
    post: Vec<Vec<f64>>,
}

impl ForwardCache {
    pub fn output(&self) -> &[f64] {
        self.post.last().expect("at least one layer")
    }
}

#[derive(Debug, Clone)]
pub struct DenseNet {
    pub layers: Vec<Layer>,
    moments: Vec<Moments>,
    pub step: u64,
}

impl DenseNet {
    /// Glorot-uniform init: `dims` is [input, hidden..., output]; every
    /// layer but the last is followed by tanh.
    pub fn glorot(dims: &[usize], rng: &mut SeededRng) -> Self {
        assert!(dims.len() >= 2, "need at least input and output widths");
        let layers = dims
            .windows(2)
            .map(|d| {
                let (fan_in, fan_out) = (d[0], d[1]);
                let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
                Layer {
                    w: (0..fan_in * fan_out).map(|_| rng.uniform(-bound, bound)).collect(),
                    b: vec![0.0; fan_out],
                    in_dim: fan_in,
                    out_dim: fan_out,
                }
            })
            .collect::<Vec<_>>();
        let moments = layers
            .iter()
            .map(|l| Moments {
                mw: vec![0.0; l.w.len()],
                vw: vec![0.0; l.w.len()],
                mb: vec![0.0; l.b.len()],
                vb: vec![0.0; l.b.len()],
            })
            .collect();
        Self {
            layers,
            moments,
            step: 0,
        }
    }

    pub fn from_layers(layers: Vec<Layer>) -> Self {
        let moments = layers
            .iter()
            .map(|l| Moments {
                mw: vec![0.0; l.w.len()],
                vw: vec![0.0; l.w.len()],
                mb: vec![0.0; l.b.len()],
                vb: vec![0.0; l.b.len()],
            })
            .collect();
        Self {
            layers,
            moments,
            step: 0,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("nonempty").out_dim
    }

    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_cached(input)?.post.pop_last())
    }

    pub fn forward_cached(&self, input: &[f64]) -> Result<ForwardCache> {
        if input.len() != self.input_dim() {
            return Err(NnError::InputWidth {
                expected: self.input_dim(),
                got: input.len(),
            });
        }
        let n_layers = self.layers.len();
        let mut post = Vec::with_capacity(n_layers);
        let mut cur = input;
        for (li, layer) in self.layers.iter().enumerate() {
            let mut out = vec![0.0; layer.out_dim];
            for (o, ob) in out.iter_mut().enumerate() {
                let row = &layer.w[o * layer.in_dim..(o + 1) * layer.in_dim];
                // Sequential fused accumulation, the exact order the batch
                // path uses, so both paths are bit-identical.
                let mut acc = layer.b[o];
                for (w, x) in row.iter().zip(cur) {
                    acc = w.mul_add(*x, acc);
                }
                *ob = if li + 1 < n_layers { acc.tanh() } else { acc };
            }
            post.push(out);
            cur = post.last().expect("just pushed");
        }
        Ok(ForwardCache { post })
    }

    /// Gradients of a scalar loss given dL/d(output), reusing the cache.
    pub fn backward_from_output(
        &self,
        input: &[f64],
        cache: &ForwardCache,
        grad_out: &[f64],
    ) -> Gradients {
        let mut grads = Gradients::zeros_like(self);
        self.backward_accumulate(input, cache, grad_out, &mut grads);
        grads
    }

    /// Same as `backward_from_output` but adds into an existing
    /// accumulator, so batch loops allocate nothing per example.
    pub fn backward_accumulate(
        &self,
        input: &[f64],
        cache: &ForwardCache,
        grad_out: &[f64],
        grads: &mut Gradients,
    ) {
        let n_layers = self.layers.len();
        let mut delta = grad_out.to_vec();
        for li in (0..n_layers).rev() {
            let layer = &self.layers[li];
            // delta currently refers to layer li's post-activation output;
            // fold the tanh derivative in for hidden layers.
            if li + 1 < n_layers {
                let act = &cache.post[li];
                for (d, a) in delta.iter_mut().zip(act) {
                    *d *= 1.0 - a * a;
                }
            }
            let below: &[f64] = if li == 0 { input } else { &cache.post[li - 1] };
            let gw = &mut grads.w[li];
            for (o, d) in delta.iter().enumerate() {
                let row = &mut gw[o * layer.in_dim..(o + 1) * layer.in_dim];
                for (g, x) in row.iter_mut().zip(below) {
                    *g = d.mul_add(*x, *g);
                }
            }
            for (g, d) in grads.b[li].iter_mut().zip(&delta) {
                *g += d;
            }
            if li > 0 {
                let mut next = vec![0.0; layer.in_dim];
                for (o, d) in delta.iter().enumerate() {
                    let row = &layer.w[o * layer.in_dim..(o + 1) * layer.in_dim];
                    for (n, wi) in next.iter_mut().zip(row) {
                        *n = d.mul_add(*wi, *n);
                    }
                }
                delta = next;
            }
        }
    }

    /// Mean-squared-error loss over output components and its gradients.
    pub fn backward_mse(&self, input: &[f64], target: &[f64]) -> Result<(f64, Gradients)> {
        if target.len() != self.output_dim() {
            return Err(NnError::TargetWidth {
                expected: self.output_dim(),
                got: target.len(),
            });
        }
        let cache = self.forward_cached(input)?;
        let out = cache.output();
        let n = out.len() as f64;
        let mut loss = 0.0;
        let grad_out: Vec<f64> = out
            .iter()
            .zip(target)
            .map(|(y, t)| {
                let e = y - t;
                loss += e * e;
                2.0 * e / n
            })
            .collect();
        Ok((loss / n, self.backward_from_output(input, &cache, &grad_out)))
    }

    /// One Adam update (beta1 = 0.9, beta2 = 0.999, eps = 1e-8, bias
    /// corrected).
    pub fn adam_step(&mut self, grads: &Gradients, lr: f64) {
        assert!(lr > 0.0);
        self.step += 1;
        let t = self.step as i32;
        let bc1 = 1.0 - BETA1.powi(t);
        let bc2 = 1.0 - BETA2.powi(t);
        for (li, layer) in self.layers.iter_mut().enumerate() {
            let m = &mut self.moments[li];
            adam_update(&mut layer.w, &mut m.mw, &mut m.vw, &grads.w[li], lr, bc1, bc2);
            adam_update(&mut layer.b, &mut m.mb, &mut m.vb, &grads.b[li], lr, bc1, bc2);
        }
    }
}

/// Activations of a whole batch, kept unit-major: `post[layer]` holds
/// out_dim rows of `batch` contiguous values.
pub struct BatchCache {
    post: Vec<Vec<f64>>,
    batch: usize,
}

impl BatchCache {
    /// Output row of `unit` in the final layer.
    pub fn output_row(&self, unit: usize) -> &[f64] {
        let last = self.post.last().expect("nonempty");
        &last[unit * self.batch..(unit + 1) * self.batch]
    }

    pub fn batch(&self) -> usize {
        self.batch
    }
}

impl DenseNet {
    /// Forward a whole batch. `x` is unit-major: in_dim rows of `batch`
    /// contiguous values. Weights stream through cache once per batch
    /// instead of once per example.
    pub fn forward_batch(&self, x: &[f64], batch: usize) -> Result<BatchCache> {
        if x.len() != self.input_dim() * batch {
            return Err(NnError::InputWidth {
                expected: self.input_dim() * batch,
                got: x.len(),
            });
        }
        let n_layers = self.layers.len();
        let mut post = Vec::with_capacity(n_layers);
        let mut cur = x;
        for (li, layer) in self.layers.iter().enumerate() {
            let mut out = vec![0.0; layer.out_dim * batch];
            for o in 0..layer.out_dim {
                let row = &layer.w[o * layer.in_dim..(o + 1) * layer.in_dim];
                let acc = &mut out[o * batch..(o + 1) * batch];
                acc.fill(layer.b[o]);
                for (i, &w) in row.iter().enumerate() {
                    axpy(acc, w, &cur[i * batch..(i + 1) * batch]);
                }
                if li + 1 < n_layers {
                    for a in acc.iter_mut() {
                        *a = a.tanh();
                    }
                }
            }
            post.push(out);
            cur = post.last().expect("just pushed");
        }
        Ok(BatchCache { post, batch })
    }

    /// Batched gradient accumulation given dL/d(output) rows (unit-major,
    /// same layout as the cache). Adds into `grads`.
    pub fn backward_batch(
        &self,
        x: &[f64],
        cache: &BatchCache,
        grad_out: &[f64],
        grads: &mut Gradients,
    ) {
        let batch = cache.batch;
        let n_layers = self.layers.len();
        let mut delta = grad_out.to_vec();
        for li in (0..n_layers).rev() {
            let layer = &self.layers[li];
            if li + 1 < n_layers {
                let act = &cache.post[li];
                for (d, a) in delta.iter_mut().zip(act) {
                    *d *= 1.0 - a * a;
                }
            }
            let below: &[f64] = if li == 0 { x } else { &cache.post[li - 1] };
            let gw = &mut grads.w[li];
            for o in 0..layer.out_dim {
                let drow = &delta[o * batch..(o + 1) * batch];
                let grow = &mut gw[o * layer.in_dim..(o + 1) * layer.in_dim];
                for (i, g) in grow.iter_mut().enumerate() {
                    *g += dot(drow, &below[i * batch..(i + 1) * batch]);
                }
                grads.b[li][o] += drow.iter().sum::<f64>();
            }
            if li > 0 {
                let mut next = vec![0.0; layer.in_dim * batch];
                for o in 0..layer.out_dim {
                    let drow = &delta[o * batch..(o + 1) * batch];
                    let wrow = &layer.w[o * layer.in_dim..(o + 1) * layer.in_dim];
                    for (i, &w) in wrow.iter().enumerate() {
                        axpy(&mut next[i * batch..(i + 1) * batch], w, drow);
                    }
                }
                delta = next;
            }
        }
    }
}

/// acc += w * x, elementwise; eight fixed lanes per iteration so the body
/// vectorizes.
#[inline]
fn axpy(acc: &mut [f64], w: f64, x: &[f64]) {
    let n = acc.len().min(x.len());
    let mut a8 = acc[..n].chunks_exact_mut(8);
    let mut x8 = x[..n].chunks_exact(8);
    for (ac, xc) in (&mut a8).zip(&mut x8) {
        for l in 0..8 {
            ac[l] = w.mul_add(xc[l], ac[l]);
        }
    }
    let rem = a8.into_remainder();
    let xrem = x8.remainder();
    for (a, xv) in rem.iter_mut().zip(xrem) {
        *a = w.mul_add(*xv, *a);
    }
}

/// Fixed-order 4-lane fused dot product: deterministic and wide enough for
/// the vector units to matter on the 588/620-wide input layers.
#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let chunks = n / 4;
    let (mut s0, mut s1, mut s2, mut s3) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for c in 0..chunks {
        let i = 4 * c;
        s0 = a[i].mul_add(b[i], s0);
        s1 = a[i + 1].mul_add(b[i + 1], s1);
        s2 = a[i + 2].mul_add(b[i + 2], s2);
        s3 = a[i + 3].mul_add(b[i + 3], s3);
    }
    let mut tail = 0.0;
    for i in 4 * chunks..n {
        tail = a[i].mul_add(b[i], tail);
    }
    (s0 + s1) + (s2 + s3) + tail
}

fn adam_update(
    params: &mut [f64],
    m: &mut [f64],
    v: &mut [f64],
    g: &[f64],
    lr: f64,
    bc1: f64,
    bc2: f64,
) {
    for i in 0..params.len() {
        m[i] = BETA1 * m[i] + (1.0 - BETA1) * g[i];
        v[i] = BETA2 * v[i] + (1.0 - BETA2) * g[i] * g[i];
        let mhat = m[i] / bc1;
        let vhat = v[i] / bc2;
        params[i] -= lr * mhat / (vhat.sqrt() + EPS);
    }
}

trait PopLast<T> {
    fn pop_last(self) -> T;
}

impl<T> PopLast<T> for Vec<T> {
    fn pop_last(mut self) -> T {
        self.pop().expect("nonempty")
    }
}
