//! Episode runs and evaluation records.

use std::sync::Arc;

use serde::Serialize;

use super::controller::{decide, Controller, ControllerKind};
use super::env::{episode_grid, traffic_stream, Env, EnvConfig, StepOutcome};
use super::HarnessError;
use crate::channel::SeGrid;
use crate::intent::{cv, SliceIntent};
use crate::scenario::NetworkScenario;

/// Normalized fulfillment metrics of one step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub distance_total: f64,
    pub distance_hp: f64,
    pub violations_total: f64,
    pub violations_hp: f64,
    /// Inter-slice reward of the proposed formulation.
    pub reward: f64,
    /// Reward the controller itself optimizes (equals `reward` for non-RL).
    pub own_reward: f64,
}

/// Distance and violation metrics from one step's slice intents.
///
/// Distance: sum over the group of `min(worst active drift, 0)` divided by
/// the group size. Violations: slices failing the requirement check,
/// divided by the group size. Groups without members score 0.
pub fn step_record(step: usize, intents: &[SliceIntent], reward: f64, own_reward: f64) -> StepRecord {
    let n = intents.len();
    let n_hp = intents.iter().filter(|i| i.high_priority).count();
    let norm = |x: f64, n: usize| if n == 0 { 0.0 } else { x / n as f64 };
    let hp = || intents.iter().filter(|i| i.high_priority);
    StepRecord {
        step,
        distance_total: norm(cv(intents.iter().map(|i| &i.drift)), n),
        distance_hp: norm(cv(hp().map(|i| &i.drift)), n_hp),
        violations_total: norm(intents.iter().filter(|i| i.fulfillment.violated).count() as f64, n),
        violations_hp: norm(hp().filter(|i| i.fulfillment.violated).count() as f64, n_hp),
        reward,
        own_reward,
    }
}

/// Reward a controller optimizes.
pub fn own_reward(kind: ControllerKind, out: &StepOutcome) -> f64 {
    match kind {
        ControllerKind::IntentAware => out.intent_aware_reward,
        ControllerKind::SchedSlicing => out.sched_slicing_reward,
        _ => out.inter_reward,
    }
}

/// Cumulative metrics of one evaluated episode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpisodeSummary {
    pub scenario_id: u32,
    pub episode: u32,
    pub controller: String,
    pub steps: usize,
    pub distance_total: f64,
    pub distance_hp: f64,
    pub violations_total: f64,
    pub violations_hp: f64,
    pub reward: f64,
    pub own_reward: f64,
}

/// One UE at one step, for the per-step metrics log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UeRow {
    pub episode: u32,
    pub step: usize,
    pub slice: usize,
    pub ue: usize,
    pub rbgs: usize,
    pub served_mbps: f64,
    pub effective_mbps: f64,
    pub buffer_occ: f64,
    pub latency_ms: f64,
    pub loss: f64,
    pub arrived_mbps: f64,
}

#[derive(Debug, Clone)]
pub struct EpisodeRun {
    pub summary: EpisodeSummary,
    pub steps: Vec<StepRecord>,
    pub ue_rows: Vec<UeRow>,
}

/// Runs one episode deterministically on the evaluation traffic pass.
pub fn run_episode(
    scenario: &Arc<NetworkScenario>,
    episode: u32,
    cfg: &EnvConfig,
    controller: Controller<'_>,
    record_ues: bool,
) -> Result<EpisodeRun, HarnessError> {
    let grid = Arc::new(episode_grid(scenario, episode, cfg)?);
    run_episode_on(scenario, episode, grid, cfg, controller, record_ues)
}

/// As [`run_episode`], on an already generated grid.
pub fn run_episode_on(
    scenario: &Arc<NetworkScenario>,
    episode: u32,
    grid: Arc<SeGrid>,
    cfg: &EnvConfig,
    controller: Controller<'_>,
    record_ues: bool,
) -> Result<EpisodeRun, HarnessError> {
    let mut env = Env::new(scenario.clone(), grid, traffic_stream(scenario, episode, 0, 0), cfg)?;
    let kind = controller.kind();
    let mut steps = Vec::with_capacity(cfg.steps_per_episode);
    let mut ue_rows = Vec::new();
    let layout = scenario.ue_layout();
    while !env.is_done() {
        let t = env.step_index();
        let d = decide(&env, controller);
        let out = env.step(&d.alloc)?;
        steps.push(step_record(t, &out.intents, out.inter_reward, own_reward(kind, &out)));
        if record_ues {
            for (u, m) in env.last_metrics().ues.iter().enumerate() {
                let (k, local) = layout[u];
                ue_rows.push(UeRow {
                    episode,
                    step: t,
                    slice: scenario.slices[k].index,
                    ue: local,
                    rbgs: m.rbgs,
                    served_mbps: m.served,
                    effective_mbps: m.effective,
                    buffer_occ: m.buffer_occ,
                    latency_ms: m.latency,
                    loss: m.loss,
                    arrived_mbps: m.arrived,
                });
            }
        }
    }
    let sum = |f: fn(&StepRecord) -> f64| steps.iter().map(f).sum::<f64>();
    let summary = EpisodeSummary {
        scenario_id: scenario.scenario_id,
        episode,
        controller: kind.name().into(),
        steps: steps.len(),
        distance_total: sum(|s| s.distance_total),
        distance_hp: sum(|s| s.distance_hp),
        violations_total: sum(|s| s.violations_total),
        violations_hp: sum(|s| s.violations_hp),
        reward: sum(|s| s.reward),
        own_reward: sum(|s| s.own_reward),
    };
    Ok(EpisodeRun {
        summary,
        steps,
        ue_rows,
    })
}

/// Totals per controller across episodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControllerSummary {
    pub controller: String,
    pub episodes: usize,
    pub distance_total: f64,
    pub distance_hp: f64,
    pub violations_total: f64,
    pub violations_hp: f64,
    pub reward: f64,
}

/// Cumulative sums per controller, in order of first appearance.
pub fn aggregate(records: &[EpisodeSummary]) -> Vec<ControllerSummary> {
    let mut out: Vec<ControllerSummary> = Vec::new();
    for r in records {
        let i = match out.iter().position(|s| s.controller == r.controller) {
            Some(i) => i,
            None => {
                out.push(ControllerSummary {
                    controller: r.controller.clone(),
                    episodes: 0,
                    distance_total: 0.0,
                    distance_hp: 0.0,
                    violations_total: 0.0,
                    violations_hp: 0.0,
                    reward: 0.0,
                });
                out.len() - 1
            }
        };
        let s = &mut out[i];
        s.episodes += 1;
        s.distance_total += r.distance_total;
        s.distance_hp += r.distance_hp;
        s.violations_total += r.violations_total;
        s.violations_hp += r.violations_hp;
        s.reward += r.reward;
    }
    out
}

/// Running cumulative sums of a step series (for curve plots).
pub fn cumulative(steps: &[StepRecord]) -> Vec<StepRecord> {
    let mut acc = StepRecord::default();
    steps
        .iter()
        .map(|s| {
            acc.step = s.step;
            acc.distance_total += s.distance_total;
            acc.distance_hp += s.distance_hp;
            acc.violations_total += s.violations_total;
            acc.violations_hp += s.violations_hp;
            acc.reward += s.reward;
            acc.own_reward += s.own_reward;
            acc
        })
        .collect()
}
