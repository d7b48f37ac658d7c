//! Actor-critic MLP with hand-written backprop.
//!
//! A tanh trunk feeds a linear actor head and a linear value head. The value
//! head either shares the actor's trunk or has its own of the same sizes.
//! All parameters live in one flat `Vec<f64>` so the optimizer, gradient
//! clipping and checkpointing treat them uniformly.
//!
//! Layout: actor trunk, actor head, [value trunk], value head, extras.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Layer sizes of an actor-critic network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetShape {
    pub input: usize,
    pub hidden: Vec<usize>,
    pub actor: usize,
    /// Free parameters appended after the heads (the Gaussian log-stds).
    pub extra: usize,
    /// Give the value head its own trunk.
    #[serde(default)]
    pub separate_value: bool,
}

impl NetShape {
    fn layer_dims(&self) -> Vec<(usize, usize)> {
        let mut dims = Vec::new();
        let mut prev = self.input;
        for &h in &self.hidden {
            dims.push((prev, h));
            prev = h;
        }
        dims
    }

    fn trunk_len(&self) -> usize {
        self.layer_dims().iter().map(|(i, o)| i * o + o).sum()
    }

    fn trunk_out(&self) -> usize {
        self.hidden.last().copied().unwrap_or(self.input)
    }

    fn actor_head_offset(&self) -> usize {
        self.trunk_len()
    }

    /// Offset of the value trunk, if separate.
    fn value_trunk_offset(&self) -> usize {
        let t = self.trunk_out();
        self.trunk_len() + t * self.actor + self.actor
    }

    fn value_head_offset(&self) -> usize {
        self.value_trunk_offset() + if self.separate_value { self.trunk_len() } else { 0 }
    }

    pub fn param_count(&self) -> usize {
        self.value_head_offset() + self.trunk_out() + 1 + self.extra
    }

    /// Offset of the extra parameters.
    pub fn extra_offset(&self) -> usize {
        self.param_count() - self.extra
    }
}

/// Activations kept for the backward pass.
#[derive(Debug, Clone)]
pub struct Forward {
    /// Outputs of each actor-trunk layer (after tanh).
    pub hidden: Vec<Vec<f64>>,
    /// Outputs of each value-trunk layer; empty when the trunk is shared.
    pub value_hidden: Vec<Vec<f64>>,
    pub actor: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActorCritic {
    pub shape: NetShape,
    pub params: Vec<f64>,
}

fn linear(w: &[f64], b: &[f64], x: &[f64], out: &mut Vec<f64>) {
    let n_in = x.len();
    out.clear();
    out.extend(b.iter().enumerate().map(|(o, &bias)| {
        let row = &w[o * n_in..(o + 1) * n_in];
        bias + row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
    }));
}

fn trunk_forward(p: &[f64], dims: &[(usize, usize)], x: &[f64]) -> Vec<Vec<f64>> {
    let mut off = 0;
    let mut hidden: Vec<Vec<f64>> = Vec::with_capacity(dims.len());
    for &(i, o) in dims {
        let input = hidden.last().map(|v| v.as_slice()).unwrap_or(x);
        let mut h = Vec::with_capacity(o);
        linear(&p[off..off + i * o], &p[off + i * o..off + i * o + o], input, &mut h);
        h.iter_mut().for_each(|v| *v = v.tanh());
        off += i * o + o;
        hidden.push(h);
    }
    hidden
}

/// Backprop of `d_top` through a trunk whose parameters start at `p[0]`.
fn trunk_backward(p: &[f64], dims: &[(usize, usize)], x: &[f64], hidden: &[Vec<f64>], d_top: Vec<f64>, grad: &mut [f64]) {
    let mut offsets = Vec::with_capacity(dims.len());
    let mut acc = 0;
    for &(i, o) in dims {
        offsets.push(acc);
        acc += i * o + o;
    }
    let mut d_out = d_top;
    for l in (0..dims.len()).rev() {
        let (n_in, n_out) = dims[l];
        let h = &hidden[l];
        let input: &[f64] = if l == 0 { x } else { &hidden[l - 1] };
        let off = offsets[l];
        let mut d_in = vec![0.0; if l == 0 { 0 } else { n_in }];
        for o in 0..n_out {
            let dz = d_out[o] * (1.0 - h[o] * h[o]);
            if dz == 0.0 {
                continue;
            }
            let row = off + o * n_in;
            for j in 0..n_in {
                grad[row + j] += dz * input[j];
            }
            if l > 0 {
                for j in 0..n_in {
                    d_in[j] += dz * p[row + j];
                }
            }
            grad[off + n_in * n_out + o] += dz;
        }
        d_out = d_in;
    }
}

impl ActorCritic {
    pub fn zeros(shape: NetShape) -> Self {
        let n = shape.param_count();
        Self {
            shape,
            params: vec![0.0; n],
        }
    }

    /// Scaled-Gaussian init: trunks `sqrt(1/fan_in)`, actor head 0.01 of
    /// that, zero biases, extras at `extra_init`.
    pub fn init<R: Rng + ?Sized>(shape: NetShape, rng: &mut R, extra_init: f64) -> Self {
        let mut net = Self::zeros(shape);
        let mut off = 0;
        let mut fill = |params: &mut [f64], off: &mut usize, n_in: usize, n_out: usize, gain: f64| {
            let s = gain * (1.0 / n_in as f64).sqrt();
            for p in &mut params[*off..*off + n_in * n_out] {
                *p = s * rng.sample::<f64, _>(StandardNormal);
            }
            *off += n_in * n_out + n_out;
        };
        let dims = net.shape.layer_dims();
        for &(i, o) in &dims {
            fill(&mut net.params, &mut off, i, o, 1.0);
        }
        let t = net.shape.trunk_out();
        let a = net.shape.actor;
        fill(&mut net.params, &mut off, t, a, 0.01);
        if net.shape.separate_value {
            for &(i, o) in &dims {
                fill(&mut net.params, &mut off, i, o, 1.0);
            }
        }
        fill(&mut net.params, &mut off, t, 1, 1.0);
        let eo = net.shape.extra_offset();
        for p in &mut net.params[eo..] {
            *p = extra_init;
        }
        net
    }

    pub fn extra(&self) -> &[f64] {
        &self.params[self.shape.extra_offset()..]
    }

    pub fn forward(&self, x: &[f64]) -> Forward {
        debug_assert_eq!(x.len(), self.shape.input);
        let p = &self.params;
        let dims = self.shape.layer_dims();
        let hidden = trunk_forward(p, &dims, x);
        let value_hidden = if self.shape.separate_value {
            trunk_forward(&p[self.shape.value_trunk_offset()..], &dims, x)
        } else {
            Vec::new()
        };
        let t = self.shape.trunk_out();
        let a = self.shape.actor;
        let top: &[f64] = hidden.last().map(|v| v.as_slice()).unwrap_or(x);
        let off = self.shape.actor_head_offset();
        let mut actor = Vec::with_capacity(a);
        linear(&p[off..off + t * a], &p[off + t * a..off + t * a + a], top, &mut actor);
        let vtop: &[f64] = if self.shape.separate_value {
            value_hidden.last().map(|v| v.as_slice()).unwrap_or(x)
        } else {
            top
        };
        let off = self.shape.value_head_offset();
        let mut v = Vec::with_capacity(1);
        linear(&p[off..off + t], &p[off + t..off + t + 1], vtop, &mut v);
        Forward {
            hidden,
            value_hidden,
            actor,
            value: v[0],
        }
    }

    /// Accumulates into `grad` the gradient of a loss whose partials with
    /// respect to the actor outputs and value are `d_actor` and `d_value`.
    /// Gradients for the extra parameters are the caller's job.
    pub fn backward(&self, x: &[f64], fwd: &Forward, d_actor: &[f64], d_value: f64, grad: &mut [f64]) {
        let p = &self.params;
        let dims = self.shape.layer_dims();
        let t = self.shape.trunk_out();
        let a = self.shape.actor;
        let sep = self.shape.separate_value;
        let top: &[f64] = fwd.hidden.last().map(|v| v.as_slice()).unwrap_or(x);
        let vtop: &[f64] = if sep {
            fwd.value_hidden.last().map(|v| v.as_slice()).unwrap_or(x)
        } else {
            top
        };

        let mut d_top = vec![0.0; t];
        let off = self.shape.actor_head_offset();
        for o in 0..a {
            let g = d_actor[o];
            if g == 0.0 {
                continue;
            }
            for j in 0..t {
                grad[off + o * t + j] += g * top[j];
                d_top[j] += g * p[off + o * t + j];
            }
            grad[off + t * a + o] += g;
        }
        let mut d_vtop = vec![0.0; t];
        let off = self.shape.value_head_offset();
        if d_value != 0.0 {
            for j in 0..t {
                grad[off + j] += d_value * vtop[j];
                d_vtop[j] += d_value * p[off + j];
            }
            grad[off + t] += d_value;
        }

        if sep {
            let vo = self.shape.value_trunk_offset();
            let vl = self.shape.trunk_len();
            trunk_backward(&p[vo..vo + vl], &dims, x, &fwd.value_hidden, d_vtop, &mut grad[vo..vo + vl]);
        } else {
            d_top.iter_mut().zip(&d_vtop).for_each(|(a, b)| *a += b);
        }
        let tl = self.shape.trunk_len();
        trunk_backward(&p[..tl], &dims, x, &fwd.hidden, d_top, &mut grad[..tl]);
    }
}
