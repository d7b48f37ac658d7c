//! Observation vectors.
//!
//! Inter-slice observations are five fixed-size slice blocks sorted by
//! throughput requirement, so the same network serves any scenario and the
//! policy sees slices of the same type in the same relative place. Action
//! slot `k` refers to the slice in block `k`.

use serde::{Deserialize, Serialize};

use crate::intent::Drifts;
use crate::scenario::{ActiveSlice, NetworkScenario};
use crate::simnet::SliceMetrics;
use crate::{MAX_SLICES, MAX_UES, MAX_UES_PER_SLICE, RBG_COUNT};

pub const INTER_BLOCK: usize = 10;
pub const INTER_OBS_LEN: usize = INTER_BLOCK * MAX_SLICES;
pub const INTRA_OBS_LEN: usize = 9 + 2 * MAX_UES_PER_SLICE;
pub const RAW_BLOCK: usize = 10;
pub const RAW_OBS_LEN: usize = RAW_BLOCK * MAX_SLICES;

/// Normalizers for observation entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ObsConfig {
    pub thr_req_max: f64,
    pub ue_max: f64,
    pub se_max: f64,
}

impl Default for ObsConfig {
    fn default() -> Self {
        Self {
            thr_req_max: 100.0,
            ue_max: MAX_UES as f64,
            se_max: 20.0,
        }
    }
}

fn unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Scenario slice indices (into `scenario.slices`) in block order:
/// throughput requirement descending, ties by slice position.
pub fn slot_order(scenario: &NetworkScenario) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scenario.slices.len()).collect();
    let thr = |k: usize| scenario.slices[k].spec.thr_req.unwrap_or(0.0);
    order.sort_by(|&a, &b| {
        thr(b)
            .total_cmp(&thr(a))
            .then(scenario.slices[a].index.cmp(&scenario.slices[b].index))
    });
    order
}

/// Mask over action slots: the first `n_active` are live.
pub fn slot_mask(scenario: &NetworkScenario) -> Vec<bool> {
    (0..MAX_SLICES).map(|k| k < scenario.slices.len()).collect()
}

fn intent_entries(slice: &ActiveSlice, drift: &Drifts) -> [f64; 6] {
    let f = slice.spec.intents();
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    [
        drift.thr.unwrap_or(0.0) * flag(f.thr),
        drift.lat.unwrap_or(0.0) * flag(f.lat),
        drift.loss.unwrap_or(0.0) * flag(f.loss),
        flag(f.thr),
        flag(f.lat),
        flag(f.loss),
    ]
}

/// Inter-slice observation. `drifts` and `slice_se` follow scenario order.
pub fn build_inter_obs(
    scenario: &NetworkScenario,
    drifts: &[Drifts],
    slice_se: &[f64],
    cfg: &ObsConfig,
) -> Vec<f64> {
    let mut obs = Vec::with_capacity(INTER_OBS_LEN);
    for k in slot_order(scenario) {
        let s = &scenario.slices[k];
        obs.extend(intent_entries(s, &drifts[k]));
        obs.push(if s.spec.high_priority { 1.0 } else { 0.0 });
        obs.push(unit(s.spec.thr_req.unwrap_or(0.0) / cfg.thr_req_max));
        obs.push(unit(s.ue_count as f64 / cfg.ue_max));
        obs.push(unit(slice_se[k] / cfg.se_max));
    }
    obs.resize(INTER_OBS_LEN, 0.0);
    obs
}

/// Intra-slice observation for one slice given its RBG grant.
pub fn build_intra_obs(
    slice: &ActiveSlice,
    drift: &Drifts,
    grant: usize,
    ue_occupancy: &[f64],
    ue_se: &[f64],
    cfg: &ObsConfig,
) -> Vec<f64> {
    let mut obs = Vec::with_capacity(INTRA_OBS_LEN);
    obs.extend(intent_entries(slice, drift));
    obs.push(unit(grant as f64 / RBG_COUNT as f64));
    obs.push(unit(slice.spec.thr_req.unwrap_or(0.0) / cfg.thr_req_max));
    obs.push(unit(slice.ue_count as f64 / cfg.ue_max));
    for u in 0..MAX_UES_PER_SLICE {
        obs.push(ue_occupancy.get(u).map_or(0.0, |&x| unit(x)));
    }
    for u in 0..MAX_UES_PER_SLICE {
        obs.push(ue_se.get(u).map_or(0.0, |&x| unit(x / cfg.se_max)));
    }
    obs
}

/// Raw per-slice metrics by slice position (intent-aware and sched-slicing
/// baselines): thr_req, lat_req, loss_req, SE, r, e, b_occ, latency, loss,
/// arrived traffic. Inactive positions are zero.
pub fn build_raw_obs(scenario: &NetworkScenario, metrics: &[SliceMetrics]) -> Vec<f64> {
    let mut obs = vec![0.0; RAW_OBS_LEN];
    for (s, m) in scenario.slices.iter().zip(metrics) {
        let o = (s.index - 1) * RAW_BLOCK;
        obs[o..o + RAW_BLOCK].copy_from_slice(&[
            s.spec.thr_req.unwrap_or(0.0),
            s.spec.lat_req.unwrap_or(0.0),
            s.spec.loss_req().unwrap_or(0.0),
            m.mean_se,
            m.served,
            m.effective,
            m.buffer_occ,
            m.latency,
            m.loss,
            m.arrived,
        ]);
    }
    obs
}

/// Mask over raw-observation action slots (slice positions).
pub fn position_mask(scenario: &NetworkScenario) -> Vec<bool> {
    scenario.active_mask().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::default_catalog;

    fn scen(names: &[(&str, usize)]) -> NetworkScenario {
        let cat = default_catalog();
        NetworkScenario {
            scenario_id: 0,
            seed: 0,
            slices: names
                .iter()
                .map(|&(n, idx)| {
                    let spec = cat.iter().find(|s| s.name == n).unwrap().clone();
                    ActiveSlice {
                        index: idx,
                        ue_count: spec.ue_min,
                        spec,
                    }
                })
                .collect(),
        }
    }

    fn d() -> Drifts {
        Drifts {
            thr: Some(0.5),
            lat: Some(-0.25),
            loss: Some(1.0),
        }
    }

    #[test]
    fn singleton_block_first() {
        let s = scen(&[("Video streaming 4K", 4)]);
        let o = build_inter_obs(&s, &[d()], &[5.0], &ObsConfig::default());
        assert_eq!(o.len(), 50);
        assert!(o[..10].iter().any(|&v| v != 0.0));
        assert!(o[10..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn blocks_sorted_by_throughput() {
        let s = scen(&[("Monitoring case 1", 1), ("VR gaming", 3)]);
        assert_eq!(slot_order(&s), vec![1, 0]);
        let o = build_inter_obs(&s, &[d(), d()], &[1.0, 1.0], &ObsConfig::default());
        assert_eq!(o[7], 1.0);
        assert_eq!(o[17], 0.1);
    }

    #[test]
    fn inactive_intent_zeroes_drift() {
        let s = scen(&[("Control case 2", 1)]);
        let o = build_inter_obs(&s, &[d()], &[1.0], &ObsConfig::default());
        assert_eq!(o[0], 0.0);
        assert_eq!(o[3], 0.0);
        assert_eq!(o[1], -0.25);
    }

    #[test]
    fn intra_grant_and_padding() {
        let s = scen(&[("Robotic surgery case 1", 1)]);
        let sl = &s.slices[0];
        let c = ObsConfig::default();
        let o = build_intra_obs(sl, &d(), 0, &[0.5, 0.5, 0.5], &[2.0; 3], &c);
        assert_eq!(o.len(), 19);
        assert_eq!(o[6], 0.0);
        assert_eq!(o[12..14], [0.0, 0.0]);
        assert_eq!(o[17..19], [0.0, 0.0]);
        let o = build_intra_obs(sl, &d(), 27, &[0.5], &[2.0], &c);
        assert_eq!(o[6], 1.0);
    }
}
