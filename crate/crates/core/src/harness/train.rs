//! Training and fine-tuning protocols.
//!
//! Training iterates `epochs` passes over the training episodes. After every
//! `validate_every` trained episodes (and once before any training) all
//! validation episodes are run greedily and their mean episode reward is
//! recorded; the returned policy is the one from the best validation point.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::controller::{decide_sampled, Controller, ControllerKind, Learner};
use super::env::{episode_grid, traffic_stream, Env, EnvConfig};
use super::eval::{own_reward, run_episode_on};
use super::HarnessError;
use crate::agent::checkpoint::PolicyCheckpoint;
use crate::agent::ppo::{ppo_update, PpoConfig, UpdateReport};
use crate::agent::rollout::{RolloutBuffer, Transition};
use crate::channel::SeGrid;
use crate::rng::{self, tag};
use crate::scenario::NetworkScenario;

/// One episode of one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EpisodeRef {
    /// Index into the experiment's scenario list.
    pub scenario: usize,
    pub episode: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub controller: ControllerKind,
    pub ppo: PpoConfig,
    pub epochs: usize,
    /// Trained episodes between validation sweeps.
    pub validate_every: usize,
    /// Stop once this many environment steps have been taken.
    pub max_env_steps: Option<u64>,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            controller: ControllerKind::Proposed,
            ppo: PpoConfig::default(),
            epochs: 10,
            validate_every: 10,
            max_env_steps: None,
            seed: 0,
        }
    }
}

/// Mean validation reward after a number of environment steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationPoint {
    pub env_steps: u64,
    pub episodes_trained: usize,
    pub mean_reward: f64,
}

/// One line of the training curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    /// `update` or `validation`.
    pub kind: String,
    pub index: usize,
    pub env_steps: u64,
    pub mean_reward: f64,
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub total_loss: f64,
    pub grad_norm: f64,
    pub intra_total_loss: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub best: Learner,
    pub last: Learner,
    pub validations: Vec<ValidationPoint>,
    pub curve: Vec<CurveRow>,
    /// Set when training stopped on a non-finite loss.
    pub aborted: Option<String>,
}

impl TrainOutcome {
    pub fn best_validation(&self) -> Option<ValidationPoint> {
        self.validations
            .iter()
            .copied()
            .reduce(|a, b| if b.mean_reward > a.mean_reward { b } else { a })
    }

    /// Environment steps at the first validation point reaching `threshold`.
    pub fn steps_to_reach(&self, threshold: f64) -> Option<u64> {
        self.validations
            .iter()
            .find(|v| v.mean_reward >= threshold)
            .map(|v| v.env_steps)
    }
}

/// Small memo of generated SE grids.
#[derive(Debug, Default)]
pub struct GridCache {
    map: Mutex<HashMap<(u32, u64, u32), Arc<SeGrid>>>,
    cap: usize,
}

impl GridCache {
    pub fn new(cap: usize) -> Self {
        Self {
            map: Mutex::new(HashMap::new()),
            cap,
        }
    }

    pub fn get(&self, scenario: &NetworkScenario, episode: u32, cfg: &EnvConfig) -> Result<Arc<SeGrid>, HarnessError> {
        let key = (scenario.scenario_id, scenario.seed, episode);
        if let Some(g) = self.map.lock().expect("cache lock").get(&key) {
            return Ok(g.clone());
        }
        let g = Arc::new(episode_grid(scenario, episode, cfg)?);
        let mut m = self.map.lock().expect("cache lock");
        if m.len() < self.cap {
            m.insert(key, g.clone());
        }
        Ok(g)
    }
}

/// Greedy mean episode reward over `episodes`.
pub fn validate(
    learner: &Learner,
    scenarios: &[Arc<NetworkScenario>],
    episodes: &[EpisodeRef],
    env_cfg: &EnvConfig,
    cache: &GridCache,
) -> Result<f64, HarnessError> {
    if episodes.is_empty() {
        return Ok(0.0);
    }
    let rewards: Result<Vec<f64>, HarnessError> = episodes
        .par_iter()
        .map(|e| {
            let sc = &scenarios[e.scenario];
            let grid = cache.get(sc, e.episode, env_cfg)?;
            let run = run_episode_on(sc, e.episode, grid, env_cfg, Controller::Greedy(learner), false)?;
            Ok(run.summary.own_reward)
        })
        .collect();
    let r = rewards?;
    Ok(r.iter().sum::<f64>() / r.len() as f64)
}

struct Buffers {
    inter: RolloutBuffer,
    intra: RolloutBuffer,
    rewards: Vec<f64>,
}

fn update(
    learner: &mut Learner,
    bufs: &mut Buffers,
    cfg: &PpoConfig,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<(UpdateReport, Option<UpdateReport>), HarnessError> {
    let inter = bufs.inter.drain_samples(cfg.gamma, cfg.gae_lambda);
    let intra = bufs.intra.drain_samples(cfg.gamma, cfg.gae_lambda);
    let r1 = ppo_update(&mut learner.inter.policy, &mut learner.inter.adam, &inter, cfg, rng)?;
    let r2 = match &mut learner.intra {
        Some(l) if !intra.is_empty() => Some(ppo_update(&mut l.policy, &mut l.adam, &intra, cfg, rng)?),
        _ => None,
    };
    Ok((r1, r2))
}

/// Trains a learned controller; `init` continues from existing parameters.
pub fn train(
    env_cfg: &EnvConfig,
    scenarios: &[Arc<NetworkScenario>],
    train_eps: &[EpisodeRef],
    val_eps: &[EpisodeRef],
    cfg: &TrainConfig,
    init: Option<Learner>,
) -> Result<TrainOutcome, HarnessError> {
    if !cfg.controller.is_learned() {
        return Err(HarnessError::Config(format!("{} is not trainable", cfg.controller)));
    }
    if train_eps.is_empty() {
        return Err(HarnessError::Config("no training episodes".into()));
    }
    let mut learner = match init {
        Some(l) if l.kind != cfg.controller => {
            return Err(HarnessError::Config(format!(
                "checkpoint holds {}, config trains {}",
                l.kind, cfg.controller
            )))
        }
        Some(l) => l,
        None => Learner::new(cfg.controller, &cfg.ppo, cfg.seed),
    };
    let start_steps = learner.env_steps;
    let cache = GridCache::new(64);
    let mut policy_rng = rng::stream(cfg.seed, &[tag::POLICY]);
    let mut shuffle_rng = rng::stream(cfg.seed, &[tag::SHUFFLE]);
    let mut bufs = Buffers {
        inter: RolloutBuffer::new(),
        intra: RolloutBuffer::new(),
        rewards: Vec::new(),
    };
    let mut curve = Vec::new();
    let mut validations = Vec::new();
    let mut updates = 0;

    let validate_now = |l: &Learner, episodes_trained: usize, curve: &mut Vec<CurveRow>, validations: &mut Vec<ValidationPoint>| -> Result<f64, HarnessError> {
        let r = validate(l, scenarios, val_eps, env_cfg, &cache)?;
        let steps = l.env_steps - start_steps;
        validations.push(ValidationPoint {
            env_steps: steps,
            episodes_trained,
            mean_reward: r,
        });
        curve.push(CurveRow {
            kind: "validation".into(),
            index: validations.len() - 1,
            env_steps: steps,
            mean_reward: r,
            policy_loss: 0.0,
            value_loss: 0.0,
            entropy: 0.0,
            total_loss: 0.0,
            grad_norm: 0.0,
            intra_total_loss: 0.0,
        });
        Ok(r)
    };

    let mut best = learner.clone();
    let mut best_r = validate_now(&learner, 0, &mut curve, &mut validations)?;
    let mut trained = 0usize;
    let budget = cfg.max_env_steps.unwrap_or(u64::MAX);
    let mut aborted = None;

    'outer: for epoch in 0..cfg.epochs {
        for e in train_eps {
            if learner.env_steps - start_steps >= budget {
                break 'outer;
            }
            let sc = &scenarios[e.scenario];
            let grid = cache.get(sc, e.episode, env_cfg)?;
            let traffic = traffic_stream(sc, e.episode, cfg.seed, epoch as u64 + 1);
            let mut env = Env::new(sc.clone(), grid, traffic, env_cfg)?;
            while !env.is_done() {
                let mut d = decide_sampled(&env, &learner, &mut policy_rng);
                if bufs.inter.len() >= cfg.ppo.batch_size {
                    let iv = d.inter.as_ref().expect("learned controllers act").value;
                    bufs.inter.truncate(0, iv);
                    for (k, s) in &d.intra {
                        bufs.intra.truncate(*k, s.value);
                    }
                    let mean_r = bufs.rewards.iter().sum::<f64>() / bufs.rewards.len().max(1) as f64;
                    bufs.rewards.clear();
                    match update(&mut learner, &mut bufs, &cfg.ppo, &mut shuffle_rng) {
                        Ok((r1, r2)) => curve.push(CurveRow {
                            kind: "update".into(),
                            index: updates,
                            env_steps: learner.env_steps - start_steps,
                            mean_reward: mean_r,
                            policy_loss: r1.policy_loss,
                            value_loss: r1.value_loss,
                            entropy: r1.entropy,
                            total_loss: r1.total_loss,
                            grad_norm: r1.grad_norm,
                            intra_total_loss: r2.map_or(0.0, |r| r.total_loss),
                        }),
                        Err(HarnessError::Ppo(e)) => {
                            aborted = Some(e.to_string());
                            break 'outer;
                        }
                        Err(e) => return Err(e),
                    }
                    updates += 1;
                    d = decide_sampled(&env, &learner, &mut policy_rng);
                }
                let out = env.step(&d.alloc)?;
                learner.env_steps += 1;
                let done = env.is_done();
                let r = own_reward(learner.kind, &out);
                bufs.rewards.push(r);
                let s = d.inter.expect("learned controllers act");
                bufs.inter.push(
                    0,
                    Transition {
                        obs: s.obs,
                        action: s.action,
                        mask: s.mask,
                        log_prob: s.log_prob,
                        value: s.value,
                        reward: r,
                        done,
                    },
                );
                for (k, s) in d.intra {
                    bufs.intra.push(
                        k,
                        Transition {
                            obs: s.obs,
                            action: s.action,
                            mask: s.mask,
                            log_prob: s.log_prob,
                            value: s.value,
                            reward: out.intra_rewards[k],
                            done,
                        },
                    );
                }
            }
            trained += 1;
            if cfg.validate_every > 0 && trained % cfg.validate_every == 0 {
                let r = validate_now(&learner, trained, &mut curve, &mut validations)?;
                if r > best_r {
                    best_r = r;
                    best = learner.clone();
                }
            }
        }
    }
    Ok(TrainOutcome {
        best,
        last: learner,
        validations,
        curve,
        aborted,
    })
}

/// Continues training from the parameters and optimizer state in `ckpt`.
pub fn finetune(
    env_cfg: &EnvConfig,
    scenarios: &[Arc<NetworkScenario>],
    train_eps: &[EpisodeRef],
    val_eps: &[EpisodeRef],
    cfg: &TrainConfig,
    ckpt: &PolicyCheckpoint,
) -> Result<TrainOutcome, HarnessError> {
    let mut l = Learner::from_checkpoint(ckpt, &cfg.ppo)?;
    // Step counts in the outcome are relative to the start of this run.
    l.env_steps = 0;
    train(env_cfg, scenarios, train_eps, val_eps, cfg, Some(l))
}
