//! Schedulers that turn an environment state into an [`Allocation`].

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::env::Env;
use crate::agent::checkpoint::{CheckpointError, PolicyCheckpoint, TrainedNet};
use crate::agent::obs::{position_mask, slot_mask, INTER_OBS_LEN, INTRA_OBS_LEN, RAW_OBS_LEN};
use crate::agent::policy::{to_factors, Action, HeadKind, Policy};
use crate::agent::nn::NetShape;
use crate::agent::ppo::{Adam, PpoConfig};
use crate::rng::{self, tag};
use crate::sched::{chi_allocate, inter_mapf, inter_marr, intra_mt, intra_pf, intra_rr, IntraKernel};
use crate::simnet::Allocation;
use crate::{MAX_SLICES, RBG_COUNT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControllerKind {
    Proposed,
    Marr,
    Mapf,
    IntentAware,
    SchedSlicing,
}

impl ControllerKind {
    pub const ALL: [ControllerKind; 5] = [
        Self::Proposed,
        Self::Marr,
        Self::Mapf,
        Self::IntentAware,
        Self::SchedSlicing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Proposed => "proposed",
            Self::Marr => "marr",
            Self::Mapf => "mapf",
            Self::IntentAware => "intent_aware",
            Self::SchedSlicing => "sched_slicing",
        }
    }

    pub fn is_learned(self) -> bool {
        matches!(self, Self::Proposed | Self::IntentAware | Self::SchedSlicing)
    }
}

impl fmt::Display for ControllerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ControllerKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown controller `{s}`"))
    }
}

/// A policy with its optimizer state.
#[derive(Debug, Clone, PartialEq)]
pub struct Learnable {
    pub policy: Policy,
    pub adam: Adam,
}

impl Learnable {
    fn new<R: Rng + ?Sized>(kind: HeadKind, shape: NetShape, rng: &mut R) -> Self {
        let policy = Policy::with_shape(kind, shape, rng);
        let adam = Adam::new(policy.net.params.len());
        Self { policy, adam }
    }
}

/// Trainable controller state: one inter policy, plus the shared intra
/// policy for the proposed scheduler.
#[derive(Debug, Clone, PartialEq)]
pub struct Learner {
    pub kind: ControllerKind,
    pub inter: Learnable,
    pub intra: Option<Learnable>,
    pub env_steps: u64,
}

impl Learner {
    pub fn new(kind: ControllerKind, ppo: &PpoConfig, seed: u64) -> Self {
        assert!(kind.is_learned(), "{kind} has no parameters");
        let mut r = rng::stream(seed, &[tag::INIT]);
        let input = if kind == ControllerKind::Proposed { INTER_OBS_LEN } else { RAW_OBS_LEN };
        let (h, sv) = (&ppo.hidden, ppo.separate_value);
        let g = HeadKind::Gaussian;
        let inter = Learnable::new(g, Policy::shape(g, input, h, MAX_SLICES, sv), &mut r);
        let c = HeadKind::Categorical;
        let intra = (kind == ControllerKind::Proposed).then(|| {
            Learnable::new(c, Policy::shape(c, INTRA_OBS_LEN, h, IntraKernel::ALL.len(), sv), &mut r)
        });
        Self {
            kind,
            inter,
            intra,
            env_steps: 0,
        }
    }

    pub fn to_checkpoint(&self) -> PolicyCheckpoint {
        let mut nets = vec![TrainedNet {
            role: "inter".into(),
            policy: self.inter.policy.clone(),
            adam: self.inter.adam.clone(),
        }];
        if let Some(i) = &self.intra {
            nets.push(TrainedNet {
                role: "intra".into(),
                policy: i.policy.clone(),
                adam: i.adam.clone(),
            });
        }
        PolicyCheckpoint {
            controller: self.kind.name().into(),
            env_steps: self.env_steps,
            nets,
        }
    }

    /// Rebuilds a learner, checking shapes against a fresh one.
    pub fn from_checkpoint(c: &PolicyCheckpoint, ppo: &PpoConfig) -> Result<Self, CheckpointError> {
        let kind: ControllerKind = c.controller.parse().map_err(|e: String| CheckpointError::Header(e))?;
        let fresh = Self::new(kind, ppo, 0);
        let take = |role: &str, want: &Learnable| -> Result<Learnable, CheckpointError> {
            let n = c.expect_shape(role, &want.policy.net.shape)?;
            Ok(Learnable {
                policy: n.policy.clone(),
                adam: n.adam.clone(),
            })
        };
        Ok(Self {
            kind,
            inter: take("inter", &fresh.inter)?,
            intra: fresh.intra.as_ref().map(|i| take("intra", i)).transpose()?,
            env_steps: c.env_steps,
        })
    }
}

/// How a controller picks actions.
#[derive(Debug, Clone, Copy)]
pub enum Controller<'a> {
    Marr,
    Mapf,
    /// Distribution means / argmax.
    Greedy(&'a Learner),
}

impl<'a> Controller<'a> {
    pub fn kind(&self) -> ControllerKind {
        match self {
            Self::Marr => ControllerKind::Marr,
            Self::Mapf => ControllerKind::Mapf,
            Self::Greedy(l) => l.kind,
        }
    }
}

/// What one agent did at one step, for the rollout buffer.
#[derive(Debug, Clone)]
pub struct AgentStep {
    pub obs: Vec<f64>,
    pub action: Action,
    pub mask: Vec<bool>,
    pub log_prob: f64,
    pub value: f64,
}

/// The allocation for one step plus the learning agents' records.
#[derive(Debug, Clone)]
pub struct Decision {
    pub alloc: Allocation,
    pub inter: Option<AgentStep>,
    /// `(scenario slice index, step)` for each intra agent.
    pub intra: Vec<(usize, AgentStep)>,
    pub kernels: Vec<IntraKernel>,
}

/// Inter-slice counts per slice position from slot-ordered factors.
fn slots_to_positions(env: &Env, factors: &[f64]) -> [usize; MAX_SLICES] {
    let sc = env.scenario();
    let mut pos_factors = vec![-1.0; MAX_SLICES];
    for (slot, &k) in env.slot_order().iter().enumerate() {
        pos_factors[sc.slices[k].index - 1] = factors[slot];
    }
    to_array(chi_allocate(&pos_factors, &sc.active_mask(), RBG_COUNT))
}

fn to_array(v: Vec<usize>) -> [usize; MAX_SLICES] {
    let mut a = [0; MAX_SLICES];
    a.copy_from_slice(&v);
    a
}

/// Per-UE counts of slice `k` under `kernel`.
pub fn apply_kernel(env: &Env, inter: &[usize; MAX_SLICES], k: usize, kernel: IntraKernel) -> Vec<usize> {
    let sc = env.scenario();
    let s = &sc.slices[k];
    let grant = inter[s.index - 1];
    let o = env.sim().ue_offsets()[k];
    let bufs = &env.sim().buffers()[o..o + s.ue_count];
    match kernel {
        IntraKernel::RoundRobin => intra_rr(grant, s.ue_count, env.step_index()),
        IntraKernel::ProportionalFair => {
            let pk: Vec<f64> = bufs.iter().map(|b| b.len() as f64).collect();
            intra_pf(grant, &pk, &env.sim().ue_avg_throughput()[o..o + s.ue_count])
        }
        IntraKernel::MaxThroughput => {
            let se = env.slice_block_se(inter, k);
            let bits: Vec<f64> = bufs.iter().map(|b| b.bits()).collect();
            intra_mt(grant, &se, &bits, env.config().channel.bandwidth_hz())
        }
    }
}

fn uniform_kernels(env: &Env, inter: [usize; MAX_SLICES], kernel: IntraKernel) -> Decision {
    let n = env.scenario().slices.len();
    let intra = (0..n).map(|k| apply_kernel(env, &inter, k, kernel)).collect();
    Decision {
        alloc: Allocation { inter, intra },
        inter: None,
        intra: Vec::new(),
        kernels: vec![kernel; n],
    }
}

/// MARR: equal RBGs per slice, round robin inside.
pub fn decide_marr(env: &Env) -> Decision {
    let sc = env.scenario();
    let inter = to_array(inter_marr(&sc.active_mask(), RBG_COUNT, env.step_index()));
    uniform_kernels(env, inter, IntraKernel::RoundRobin)
}

/// MAPF: proportional fair between slices and inside them.
pub fn decide_mapf(env: &Env) -> Decision {
    let sc = env.scenario();
    let mut buffered = vec![0.0; MAX_SLICES];
    let mut avg = vec![1.0; MAX_SLICES];
    for (k, s) in sc.slices.iter().enumerate() {
        let o = env.sim().ue_offsets()[k];
        let bufs = &env.sim().buffers()[o..o + s.ue_count];
        buffered[s.index - 1] = bufs.iter().map(|b| b.len() as f64).sum::<f64>() / s.ue_count as f64;
        avg[s.index - 1] = env.sim().slice_avg_throughput()[k];
    }
    let inter = to_array(inter_mapf(&buffered, &avg, &sc.active_mask(), RBG_COUNT));
    uniform_kernels(env, inter, IntraKernel::ProportionalFair)
}

enum Mode<'r, R: Rng + ?Sized> {
    Greedy,
    Sample(&'r mut R),
}

fn decide_learned<R: Rng + ?Sized>(env: &Env, l: &Learner, mut mode: Mode<'_, R>) -> Decision {
    let sc = env.scenario();
    let (obs, mask) = if l.kind == ControllerKind::Proposed {
        (env.inter_obs(), slot_mask(sc))
    } else {
        (env.raw_obs(), position_mask(sc))
    };
    let pol = &l.inter.policy;
    let (action, log_prob, value) = match &mut mode {
        Mode::Greedy => (pol.greedy(&obs, &mask), 0.0, 0.0),
        Mode::Sample(r) => pol.sample(&obs, &mask, *r),
    };
    let factors = to_factors(&action, &mask);
    let inter = if l.kind == ControllerKind::Proposed {
        slots_to_positions(env, &factors)
    } else {
        to_array(chi_allocate(&factors, &mask, RBG_COUNT))
    };
    let inter_step = AgentStep {
        obs,
        action,
        mask,
        log_prob,
        value,
    };
    let Some(intra_l) = &l.intra else {
        let mut d = uniform_kernels(env, inter, IntraKernel::RoundRobin);
        d.inter = Some(inter_step);
        return d;
    };
    let n = sc.slices.len();
    let mut intra = Vec::with_capacity(n);
    let mut steps = Vec::with_capacity(n);
    let mut kernels = Vec::with_capacity(n);
    let all = [true; 3];
    for k in 0..n {
        let o = env.intra_obs(k, inter[sc.slices[k].index - 1]);
        let ip = &intra_l.policy;
        let (a, lp, v) = match &mut mode {
            Mode::Greedy => (ip.greedy(&o, &all), 0.0, 0.0),
            Mode::Sample(r) => ip.sample(&o, &all, *r),
        };
        let Action::Discrete(c) = a else { unreachable!() };
        let kernel = IntraKernel::from_index(c);
        intra.push(apply_kernel(env, &inter, k, kernel));
        kernels.push(kernel);
        steps.push((
            k,
            AgentStep {
                obs: o,
                action: a,
                mask: all.to_vec(),
                log_prob: lp,
                value: v,
            },
        ));
    }
    Decision {
        alloc: Allocation { inter, intra },
        inter: Some(inter_step),
        intra: steps,
        kernels,
    }
}

/// Deterministic decision for evaluation.
pub fn decide(env: &Env, c: Controller<'_>) -> Decision {
    match c {
        Controller::Marr => decide_marr(env),
        Controller::Mapf => decide_mapf(env),
        Controller::Greedy(l) => decide_learned::<rand_chacha::ChaCha8Rng>(env, l, Mode::Greedy),
    }
}

/// Stochastic decision for training, with log-probs and values.
pub fn decide_sampled<R: Rng + ?Sized>(env: &Env, l: &Learner, rng: &mut R) -> Decision {
    decide_learned(env, l, Mode::Sample(rng))
}
