//! Stochastic policies on top of [`ActorCritic`].
//!
//! The inter-slice policy is a diagonal Gaussian with one state-independent
//! log-std per slot; masked slots are excluded from log-probabilities and
//! entropy and always emit factor -1. The intra-slice policy is a
//! categorical over the three kernels.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::nn::{ActorCritic, Forward, NetShape};

const HALF_LOG_2PI: f64 = 0.918_938_533_204_672_8;

/// Action distribution family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeadKind {
    Gaussian,
    Categorical,
}

/// An action as stored in rollouts.
#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    /// Raw (pre-clip) Gaussian sample, one entry per slot.
    Continuous(Vec<f64>),
    Discrete(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    pub kind: HeadKind,
    pub net: ActorCritic,
}

/// Distribution quantities for one state and action.
#[derive(Debug, Clone)]
pub struct Eval {
    pub fwd: Forward,
    pub log_prob: f64,
    pub entropy: f64,
}

impl Policy {
    pub fn new<R: Rng + ?Sized>(kind: HeadKind, input: usize, hidden: &[usize], actions: usize, rng: &mut R) -> Self {
        Self::with_shape(kind, Self::shape(kind, input, hidden, actions, false), rng)
    }

    /// Network shape for a head of `actions` outputs.
    pub fn shape(kind: HeadKind, input: usize, hidden: &[usize], actions: usize, separate_value: bool) -> NetShape {
        NetShape {
            input,
            hidden: hidden.to_vec(),
            actor: actions,
            extra: if kind == HeadKind::Gaussian { actions } else { 0 },
            separate_value,
        }
    }

    pub fn with_shape<R: Rng + ?Sized>(kind: HeadKind, shape: NetShape, rng: &mut R) -> Self {
        Self {
            kind,
            net: ActorCritic::init(shape, rng, 0.0),
        }
    }

    pub fn action_dim(&self) -> usize {
        self.net.shape.actor
    }

    pub fn value(&self, obs: &[f64]) -> f64 {
        self.net.forward(obs).value
    }

    fn log_std(&self) -> &[f64] {
        self.net.extra()
    }

    /// Samples an action; returns it with its log-probability and value.
    pub fn sample<R: Rng + ?Sized>(&self, obs: &[f64], mask: &[bool], rng: &mut R) -> (Action, f64, f64) {
        let fwd = self.net.forward(obs);
        let action = match self.kind {
            HeadKind::Gaussian => {
                let ls = self.log_std();
                Action::Continuous(
                    fwd.actor
                        .iter()
                        .enumerate()
                        .map(|(i, &mu)| {
                            if mask[i] {
                                mu + ls[i].exp() * rng.sample::<f64, _>(StandardNormal)
                            } else {
                                -1.0
                            }
                        })
                        .collect(),
                )
            }
            HeadKind::Categorical => {
                let p = softmax(&fwd.actor);
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut pick = p.len() - 1;
                for (i, &pi) in p.iter().enumerate() {
                    acc += pi;
                    if u < acc {
                        pick = i;
                        break;
                    }
                }
                Action::Discrete(pick)
            }
        };
        let lp = self.log_prob_from(&fwd, &action, mask);
        (action, lp, fwd.value)
    }

    /// Mean action (Gaussian) or argmax (categorical).
    pub fn greedy(&self, obs: &[f64], mask: &[bool]) -> Action {
        let fwd = self.net.forward(obs);
        match self.kind {
            HeadKind::Gaussian => Action::Continuous(
                fwd.actor
                    .iter()
                    .enumerate()
                    .map(|(i, &mu)| if mask[i] { mu } else { -1.0 })
                    .collect(),
            ),
            HeadKind::Categorical => {
                let best = (0..fwd.actor.len())
                    .max_by(|&a, &b| fwd.actor[a].total_cmp(&fwd.actor[b]).then(b.cmp(&a)))
                    .unwrap_or(0);
                Action::Discrete(best)
            }
        }
    }

    fn log_prob_from(&self, fwd: &Forward, action: &Action, mask: &[bool]) -> f64 {
        match (self.kind, action) {
            (HeadKind::Gaussian, Action::Continuous(x)) => {
                let ls = self.log_std();
                (0..x.len())
                    .filter(|&i| mask[i])
                    .map(|i| {
                        let z = (x[i] - fwd.actor[i]) / ls[i].exp();
                        -0.5 * z * z - ls[i] - HALF_LOG_2PI
                    })
                    .sum()
            }
            (HeadKind::Categorical, Action::Discrete(a)) => log_softmax(&fwd.actor)[*a],
            _ => panic!("action does not match policy head"),
        }
    }

    fn entropy_from(&self, fwd: &Forward, mask: &[bool]) -> f64 {
        match self.kind {
            HeadKind::Gaussian => self
                .log_std()
                .iter()
                .zip(mask)
                .filter(|(_, &m)| m)
                .map(|(ls, _)| 0.5 + HALF_LOG_2PI + ls)
                .sum(),
            HeadKind::Categorical => {
                let lp = log_softmax(&fwd.actor);
                -lp.iter().map(|&l| l.exp() * l).sum::<f64>()
            }
        }
    }

    pub fn evaluate(&self, obs: &[f64], action: &Action, mask: &[bool]) -> Eval {
        let fwd = self.net.forward(obs);
        let log_prob = self.log_prob_from(&fwd, action, mask);
        let entropy = self.entropy_from(&fwd, mask);
        Eval { fwd, log_prob, entropy }
    }

    /// Backprops `d_logp * dlogp + d_ent * dH + d_value * dV` into `grad`.
    pub fn backward(
        &self,
        obs: &[f64],
        action: &Action,
        mask: &[bool],
        ev: &Eval,
        d_logp: f64,
        d_ent: f64,
        d_value: f64,
        grad: &mut [f64],
    ) {
        let a = self.action_dim();
        let mut d_actor = vec![0.0; a];
        match (self.kind, action) {
            (HeadKind::Gaussian, Action::Continuous(x)) => {
                let eo = self.net.shape.extra_offset();
                let ls = self.log_std();
                for i in (0..a).filter(|&i| mask[i]) {
                    let var = (2.0 * ls[i]).exp();
                    let diff = x[i] - ev.fwd.actor[i];
                    d_actor[i] = d_logp * diff / var;
                    grad[eo + i] += d_logp * (diff * diff / var - 1.0) + d_ent;
                }
            }
            (HeadKind::Categorical, Action::Discrete(k)) => {
                let lp = log_softmax(&ev.fwd.actor);
                let h = ev.entropy;
                for i in 0..a {
                    let p = lp[i].exp();
                    let one = if i == *k { 1.0 } else { 0.0 };
                    d_actor[i] = d_logp * (one - p) + d_ent * (-p * (lp[i] + h));
                }
            }
            _ => panic!("action does not match policy head"),
        }
        self.net.backward(obs, &ev.fwd, &d_actor, d_value, grad);
    }
}

pub fn log_softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = m + z.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
    z.iter().map(|v| v - lse).collect()
}

pub fn softmax(z: &[f64]) -> Vec<f64> {
    log_softmax(z).into_iter().map(f64::exp).collect()
}

/// Clips raw Gaussian samples into factors in `[-1, 1]`; masked slots get -1.
pub fn to_factors(action: &Action, mask: &[bool]) -> Vec<f64> {
    match action {
        Action::Continuous(x) => x
            .iter()
            .zip(mask)
            .map(|(&v, &m)| if m { v.clamp(-1.0, 1.0) } else { -1.0 })
            .collect(),
        Action::Discrete(_) => panic!("discrete action has no factors"),
    }
}

#[cfg(test)]
fn gaussian_entropy(log_std: f64) -> f64 {
    0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln() + log_std
}
