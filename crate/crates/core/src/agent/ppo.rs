//! PPO with a clipped surrogate, MSE value loss, entropy bonus and Adam.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::policy::{Action, Policy};

#[derive(Debug, Error, PartialEq)]
pub enum PpoError {
    #[error("non-finite loss in epoch {epoch}, minibatch {batch}: {detail}")]
    NonFinite {
        epoch: usize,
        batch: usize,
        detail: String,
    },
    #[error("empty rollout")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PpoConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub minibatch_size: usize,
    pub epochs: usize,
    pub gamma: f64,
    pub gae_lambda: f64,
    pub clip_range: f64,
    pub entropy_coef: f64,
    pub value_coef: f64,
    pub max_grad_norm: f64,
    pub hidden: Vec<usize>,
    /// Value head on its own trunk instead of sharing the actor's.
    pub separate_value: bool,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
}

impl Default for PpoConfig {
    fn default() -> Self {
        Self {
            learning_rate: 3e-4,
            batch_size: 2048,
            minibatch_size: 64,
            epochs: 10,
            gamma: 0.99,
            gae_lambda: 0.95,
            clip_range: 0.2,
            entropy_coef: 0.01,
            value_coef: 0.5,
            max_grad_norm: 0.5,
            hidden: vec![64, 64],
            separate_value: true,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
        }
    }
}

/// Adam state for one flat parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Adam {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl Adam {
    pub fn new(n: usize) -> Self {
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64], cfg: &PpoConfig) {
        self.t += 1;
        let (b1, b2) = (cfg.adam_beta1, cfg.adam_beta2);
        let c1 = 1.0 - b1.powi(self.t as i32);
        let c2 = 1.0 - b2.powi(self.t as i32);
        for i in 0..params.len() {
            self.m[i] = b1 * self.m[i] + (1.0 - b1) * grad[i];
            self.v[i] = b2 * self.v[i] + (1.0 - b2) * grad[i] * grad[i];
            let mh = self.m[i] / c1;
            let vh = self.v[i] / c2;
            params[i] -= cfg.learning_rate * mh / (vh.sqrt() + cfg.adam_eps);
        }
    }
}

/// One training transition after GAE.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub obs: Vec<f64>,
    pub action: Action,
    pub mask: Vec<bool>,
    pub log_prob: f64,
    pub advantage: f64,
    pub ret: f64,
}

/// Loss terms of one minibatch (means over samples).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct LossTerms {
    pub policy: f64,
    pub value: f64,
    pub entropy: f64,
    pub total: f64,
    pub clip_fraction: f64,
    pub approx_kl: f64,
}

/// Clipped surrogate `min(r A, clip(r, 1-eps, 1+eps) A)` and its derivative in `r`.
pub fn clipped_surrogate(ratio: f64, adv: f64, eps: f64) -> (f64, f64) {
    let unclipped = ratio * adv;
    let clipped = ratio.clamp(1.0 - eps, 1.0 + eps) * adv;
    if unclipped <= clipped {
        (unclipped, adv)
    } else if ratio > 1.0 - eps && ratio < 1.0 + eps {
        (clipped, adv)
    } else {
        (clipped, 0.0)
    }
}

/// Total loss of a minibatch and its gradient (accumulated into `grad`).
///
/// Advantages are normalized within the minibatch.
pub fn minibatch_loss(policy: &Policy, batch: &[&Sample], cfg: &PpoConfig, grad: &mut [f64]) -> LossTerms {
    let n = batch.len() as f64;
    let mean_a = batch.iter().map(|s| s.advantage).sum::<f64>() / n;
    let var_a = batch.iter().map(|s| (s.advantage - mean_a).powi(2)).sum::<f64>() / n;
    let std_a = var_a.sqrt();
    let mut t = LossTerms::default();
    for s in batch {
        let adv = (s.advantage - mean_a) / (std_a + 1e-8);
        let ev = policy.evaluate(&s.obs, &s.action, &s.mask);
        let log_ratio = ev.log_prob - s.log_prob;
        let ratio = log_ratio.exp();
        let (surr, d_surr) = clipped_surrogate(ratio, adv, cfg.clip_range);
        let verr = ev.fwd.value - s.ret;
        t.policy -= surr / n;
        t.value += verr * verr / n;
        t.entropy += ev.entropy / n;
        if (ratio - 1.0).abs() > cfg.clip_range {
            t.clip_fraction += 1.0 / n;
        }
        t.approx_kl += ((ratio - 1.0) - log_ratio) / n;
        let d_logp = -d_surr * ratio / n;
        let d_ent = -cfg.entropy_coef / n;
        let d_value = cfg.value_coef * 2.0 * verr / n;
        policy.backward(&s.obs, &s.action, &s.mask, &ev, d_logp, d_ent, d_value, grad);
    }
    t.total = t.policy + cfg.value_coef * t.value - cfg.entropy_coef * t.entropy;
    t
}

/// Rescales `grad` to at most `max_norm`; returns the norm before clipping.
pub fn clip_grad_norm(grad: &mut [f64], max_norm: f64) -> f64 {
    let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    if norm > max_norm && norm > 0.0 {
        let s = max_norm / norm;
        grad.iter_mut().for_each(|g| *g *= s);
    }
    norm
}

/// Averages over one update.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct UpdateReport {
    pub samples: usize,
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub total_loss: f64,
    pub grad_norm: f64,
    pub clip_fraction: f64,
    pub approx_kl: f64,
}

/// Runs `epochs` passes of shuffled minibatches over `samples`.
pub fn ppo_update<R: Rng + ?Sized>(
    policy: &mut Policy,
    adam: &mut Adam,
    samples: &[Sample],
    cfg: &PpoConfig,
    rng: &mut R,
) -> Result<UpdateReport, PpoError> {
    if samples.is_empty() {
        return Err(PpoError::Empty);
    }
    let mut idx: Vec<usize> = (0..samples.len()).collect();
    let mut rep = UpdateReport {
        samples: samples.len(),
        ..Default::default()
    };
    let mut count = 0.0;
    let mut grad = vec![0.0; policy.net.params.len()];
    for epoch in 0..cfg.epochs {
        idx.shuffle(rng);
        for (b, chunk) in idx.chunks(cfg.minibatch_size.max(1)).enumerate() {
            let batch: Vec<&Sample> = chunk.iter().map(|&i| &samples[i]).collect();
            grad.iter_mut().for_each(|g| *g = 0.0);
            let t = minibatch_loss(policy, &batch, cfg, &mut grad);
            if !t.total.is_finite() || grad.iter().any(|g| !g.is_finite()) {
                return Err(PpoError::NonFinite {
                    epoch,
                    batch: b,
                    detail: format!("{t:?}"),
                });
            }
            let norm = clip_grad_norm(&mut grad, cfg.max_grad_norm);
            adam.step(&mut policy.net.params, &grad, cfg);
            rep.policy_loss += t.policy;
            rep.value_loss += t.value;
            rep.entropy += t.entropy;
            rep.total_loss += t.total;
            rep.grad_norm += norm;
            rep.clip_fraction += t.clip_fraction;
            rep.approx_kl += t.approx_kl;
            count += 1.0;
        }
    }
    rep.policy_loss /= count;
    rep.value_loss /= count;
    rep.entropy /= count;
    rep.total_loss /= count;
    rep.grad_norm /= count;
    rep.clip_fraction /= count;
    rep.approx_kl /= count;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surrogate_examples() {
        assert_eq!(clipped_surrogate(1.5, 1.0, 0.2).0, 1.2);
        assert_eq!(clipped_surrogate(1.5, 1.0, 0.2).1, 0.0);
        assert_eq!(clipped_surrogate(1.0, 2.0, 0.2), (2.0, 2.0));
        // Negative advantage below the band keeps the unclipped, larger penalty.
        assert_eq!(clipped_surrogate(0.5, -1.0, 0.2).0, -0.8);
        assert_eq!(clipped_surrogate(1.5, -1.0, 0.2), (-1.5, -1.0));
    }

    #[test]
    fn grad_clip() {
        let mut g = vec![3.0, 4.0];
        assert_eq!(clip_grad_norm(&mut g, 0.5), 5.0);
        assert!((g[0] - 0.3).abs() < 1e-15 && (g[1] - 0.4).abs() < 1e-15);
        let mut g = vec![0.1, 0.0];
        clip_grad_norm(&mut g, 0.5);
        assert_eq!(g, vec![0.1, 0.0]);
    }

    #[test]
    fn adam_first_step_moves_by_lr() {
        let cfg = PpoConfig::default();
        let mut a = Adam::new(2);
        let mut p = vec![1.0, -1.0];
        a.step(&mut p, &[0.5, -2.0], &cfg);
        assert!((p[0] - (1.0 - 3e-4)).abs() < 1e-10);
        assert!((p[1] - (-1.0 + 3e-4)).abs() < 1e-10);
    }
}
