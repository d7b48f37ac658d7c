//! One episode of one scenario, wrapped for controllers.

use std::path::PathBuf;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agent::obs::{build_inter_obs, build_intra_obs, build_raw_obs, slot_order, ObsConfig};
use crate::agent::reward::{inter_reward, intra_reward};
use crate::channel::{generate_se_grid, load_se_grid, simulate_mobility, ChannelError, ChannelParams, MobilityParams, SeGrid};
use crate::intent::{evaluate, SliceIntent};
use crate::rng::{self, tag};
use crate::scenario::NetworkScenario;
use crate::sched::{intent_aware_reward, sched_slicing_reward};
use crate::simnet::{Allocation, SimError, SimNet, StepMetrics};
use crate::{OVERFULFILLMENT_RATE, RBS_PER_RBG};

/// Everything about the simulated network that is not the scenario itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvConfig {
    pub steps_per_episode: usize,
    pub channel: ChannelParams,
    pub mobility: MobilityParams,
    pub obs: ObsConfig,
    pub overfulfillment_rate: f64,
    /// Weight of high-priority slices in the intent-aware baseline reward.
    pub hp_weight: f64,
    /// Read SE grids from trace files here instead of generating them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_dir: Option<PathBuf>,
}

impl Default for EnvConfig {
    fn default() -> Self {
        Self {
            steps_per_episode: 1000,
            channel: ChannelParams::default(),
            mobility: MobilityParams::default(),
            obs: ObsConfig::default(),
            overfulfillment_rate: OVERFULFILLMENT_RATE,
            hp_weight: 2.0,
            trace_dir: None,
        }
    }
}

/// File name of a trace for one episode of one scenario.
pub fn trace_file_name(scenario_id: u32, episode: u32) -> String {
    format!("scenario_{scenario_id:04}_ep_{episode:04}.segrid")
}

/// The SE grid of episode `episode` of `scenario`: a pure function of the
/// scenario seed, the episode number and the channel configuration, or the
/// trace file for that episode when a trace directory is configured.
pub fn episode_grid(scenario: &NetworkScenario, episode: u32, cfg: &EnvConfig) -> Result<SeGrid, ChannelError> {
    if let Some(dir) = &cfg.trace_dir {
        let g = load_se_grid(&dir.join(trace_file_name(scenario.scenario_id, episode)))?;
        if g.ue_count() != scenario.total_ues() || g.rb_count() != cfg.channel.rb_count || g.step_count() != cfg.steps_per_episode {
            return Err(ChannelError::Params(format!(
                "trace for scenario {} episode {episode} is {}x{}x{}, need {}x{}x{}",
                scenario.scenario_id,
                g.ue_count(),
                g.rb_count(),
                g.step_count(),
                scenario.total_ues(),
                cfg.channel.rb_count,
                cfg.steps_per_episode
            )));
        }
        return Ok(g);
    }
    let ep = u64::from(episode);
    let mut mob = rng::stream(scenario.seed, &[tag::MOBILITY, ep]);
    let traj = simulate_mobility(scenario, &cfg.mobility, &mut mob, cfg.steps_per_episode);
    let mut ch = rng::stream(scenario.seed, &[tag::CHANNEL, ep]);
    generate_se_grid(&traj, &cfg.channel, &mut ch)
}

/// Traffic stream for one pass over an episode. Pass 0 is the evaluation
/// pass, shared by every controller; training passes use `pass >= 1`.
pub fn traffic_stream(scenario: &NetworkScenario, episode: u32, salt: u64, pass: u64) -> ChaCha8Rng {
    rng::stream(scenario.seed, &[tag::TRAFFIC, u64::from(episode), salt, pass])
}

/// Rewards and intents produced by one step.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub intents: Vec<SliceIntent>,
    pub inter_reward: f64,
    /// Per active slice, scenario order.
    pub intra_rewards: Vec<f64>,
    pub intent_aware_reward: f64,
    pub sched_slicing_reward: f64,
}

pub struct Env {
    cfg: EnvConfig,
    sim: SimNet,
    traffic: ChaCha8Rng,
    intents: Vec<SliceIntent>,
    order: Vec<usize>,
}

impl Env {
    pub fn new(
        scenario: Arc<NetworkScenario>,
        grid: Arc<SeGrid>,
        traffic: ChaCha8Rng,
        cfg: &EnvConfig,
    ) -> Result<Self, SimError> {
        let sim = SimNet::new(scenario.clone(), grid, cfg.channel.bandwidth_hz())?;
        let intents = evaluate(&scenario, sim.last_metrics(), cfg.overfulfillment_rate);
        Ok(Self {
            order: slot_order(&scenario),
            cfg: cfg.clone(),
            sim,
            traffic,
            intents,
        })
    }

    pub fn scenario(&self) -> &NetworkScenario {
        self.sim.scenario()
    }
    pub fn sim(&self) -> &SimNet {
        &self.sim
    }
    pub fn config(&self) -> &EnvConfig {
        &self.cfg
    }
    pub fn is_done(&self) -> bool {
        self.sim.is_done()
    }
    pub fn step_index(&self) -> usize {
        self.sim.step_index()
    }
    /// Intents after the most recent step.
    pub fn intents(&self) -> &[SliceIntent] {
        &self.intents
    }
    /// Scenario slice indices in observation-block order.
    pub fn slot_order(&self) -> &[usize] {
        &self.order
    }
    pub fn last_metrics(&self) -> &StepMetrics {
        self.sim.last_metrics()
    }

    /// Mean SE per active slice at the upcoming step.
    pub fn slice_se(&self) -> Vec<f64> {
        let se = self.sim.current_mean_se();
        let sc = self.sim.scenario();
        sc.slices
            .iter()
            .zip(sc.ue_offsets())
            .map(|(s, o)| se[o..o + s.ue_count].iter().sum::<f64>() / s.ue_count as f64)
            .collect()
    }

    pub fn inter_obs(&self) -> Vec<f64> {
        let drifts: Vec<_> = self.intents.iter().map(|i| i.drift).collect();
        build_inter_obs(self.scenario(), &drifts, &self.slice_se(), &self.cfg.obs)
    }

    pub fn raw_obs(&self) -> Vec<f64> {
        build_raw_obs(self.scenario(), &self.last_metrics().slices)
    }

    /// Intra observation of scenario slice `k` under `grant` RBGs.
    pub fn intra_obs(&self, k: usize, grant: usize) -> Vec<f64> {
        let sc = self.scenario();
        let s = &sc.slices[k];
        let o = self.sim.ue_offsets()[k];
        let occ: Vec<f64> = self.sim.buffers()[o..o + s.ue_count].iter().map(|b| b.occupancy()).collect();
        let se = &self.sim.current_mean_se()[o..o + s.ue_count];
        build_intra_obs(s, &self.intents[k].drift, grant, &occ, se, &self.cfg.obs)
    }

    /// Per-UE mean SE of slice `k` over the RBs its grant will occupy.
    pub fn slice_block_se(&self, inter: &[usize], k: usize) -> Vec<f64> {
        let sc = self.scenario();
        let s = &sc.slices[k];
        let start: usize = sc.slices[..k].iter().map(|x| inter[x.index - 1]).sum();
        let len = inter[s.index - 1];
        let t = self.sim.step_index().min(self.sim.episode_len() - 1);
        let o = self.sim.ue_offsets()[k];
        (0..s.ue_count)
            .map(|u| {
                let row = self.sim.grid().row(t, o + u);
                if len == 0 {
                    row.iter().map(|&v| f64::from(v)).sum::<f64>() / row.len() as f64
                } else {
                    let rb = &row[start * RBS_PER_RBG..(start + len) * RBS_PER_RBG];
                    rb.iter().map(|&v| f64::from(v)).sum::<f64>() / rb.len() as f64
                }
            })
            .collect()
    }

    pub fn step(&mut self, alloc: &Allocation) -> Result<StepOutcome, SimError> {
        let m = self.sim.step(alloc, &mut self.traffic)?.clone();
        let sc = self.sim.scenario();
        self.intents = evaluate(sc, &m, self.cfg.overfulfillment_rate);
        let pairs: Vec<_> = self.intents.iter().map(|i| (i.high_priority, i.drift)).collect();
        let (inter, _) = inter_reward(&pairs);
        let intra = self.intents.iter().map(|i| intra_reward(&i.drift)).collect();
        let ia = intent_aware_reward(&pairs, self.cfg.hp_weight);
        let specs: Vec<_> = sc.slices.iter().map(|s| &s.spec).zip(&m.slices).collect();
        let ss = sched_slicing_reward(&specs);
        Ok(StepOutcome {
            intents: self.intents.clone(),
            inter_reward: inter,
            intra_rewards: intra,
            intent_aware_reward: ia,
            sched_slicing_reward: ss,
        })
    }
}
