//! Action-to-RBG mapping and the scheduling kernels.
//!
//! [`chi_allocate`] turns per-slot factors in `[-1, 1]` into integer RBG
//! counts that always sum to the available RBGs. The inter-slice baselines
//! (MARR, MAPF) and the intra-slice kernels (RR, PF, MT) are built on it or
//! beside it. Baseline reward functions for the intent-aware and
//! sched-slicing agents live here too.

use crate::intent::Drifts;
use crate::scenario::SliceSpec;
use crate::simnet::SliceMetrics;
use crate::{RBS_PER_RBG, RB_COUNT, TTI_S};

/// Factor sums below this are treated as all-minus-one.
const DEGENERATE_EPS: f64 = 1e-12;

/// Equal split over active slots; the remainder goes to active slots in
/// order starting at active slot `rotate % n_active`.
pub fn equal_split(mask: &[bool], total: usize, rotate: usize) -> Vec<usize> {
    let active: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
    let mut out = vec![0; mask.len()];
    if active.is_empty() {
        return out;
    }
    let n = active.len();
    for &i in &active {
        out[i] = total / n;
    }
    for k in 0..total % n {
        out[active[(rotate + k) % n]] += 1;
    }
    out
}

/// Maps factors to integer counts summing to `total`.
///
/// Shares are `(a+1) / sum(a+1)` over active slots, rounded half-up. The
/// rounding error is then fixed one unit per slot, visiting slots by
/// descending count (ties: lowest index). If every active factor is -1 the
/// total is split equally with the remainder to the lowest indices.
/// Inactive slots always get 0.
pub fn chi_allocate(factors: &[f64], mask: &[bool], total: usize) -> Vec<usize> {
    assert_eq!(factors.len(), mask.len());
    let weight = |i: usize| if mask[i] { (factors[i].clamp(-1.0, 1.0) + 1.0).max(0.0) } else { 0.0 };
    let sum: f64 = (0..mask.len()).map(weight).sum();
    if !mask.iter().any(|&m| m) {
        return vec![0; mask.len()];
    }
    if sum <= DEGENERATE_EPS || !sum.is_finite() {
        return equal_split(mask, total, 0);
    }
    let mut out: Vec<usize> = (0..mask.len())
        .map(|i| (weight(i) * total as f64 / sum + 0.5).floor() as usize)
        .collect();
    loop {
        let cur: usize = out.iter().sum();
        if cur == total {
            break;
        }
        let mut order: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
        order.sort_by(|&a, &b| out[b].cmp(&out[a]).then(a.cmp(&b)));
        if cur > total {
            let mut excess = cur - total;
            for &i in &order {
                if excess == 0 {
                    break;
                }
                if out[i] > 0 {
                    out[i] -= 1;
                    excess -= 1;
                }
            }
        } else {
            let mut deficit = total - cur;
            for &i in &order {
                if deficit == 0 {
                    break;
                }
                out[i] += 1;
                deficit -= 1;
            }
        }
    }
    out
}

/// Multi-agent round robin: equal split rotating the remainder by step.
pub fn inter_marr(mask: &[bool], total: usize, step: usize) -> Vec<usize> {
    equal_split(mask, total, step)
}

/// Proportional-fair factor: buffered packets over average throughput.
pub fn pf_factor(buffered_packets: f64, avg_throughput: f64) -> f64 {
    buffered_packets / avg_throughput.max(crate::simnet::THROUGHPUT_EMA_INIT)
}

/// Maps non-negative PF factors into `[-1, 1]` through their shares.
pub fn pf_to_actions(factors: &[f64], mask: &[bool]) -> Vec<f64> {
    let sum: f64 = factors.iter().zip(mask).filter(|(_, &m)| m).map(|(f, _)| *f).sum();
    factors
        .iter()
        .zip(mask)
        .map(|(&f, &m)| if m && sum > 0.0 { 2.0 * f / sum - 1.0 } else { -1.0 })
        .collect()
}

/// Multi-agent proportional fair: slice factors fed through [`chi_allocate`].
pub fn inter_mapf(buffered_packets: &[f64], avg_throughput: &[f64], mask: &[bool], total: usize) -> Vec<usize> {
    let f: Vec<f64> = buffered_packets
        .iter()
        .zip(avg_throughput)
        .map(|(&b, &t)| pf_factor(b, t))
        .collect();
    chi_allocate(&pf_to_actions(&f, mask), mask, total)
}

/// Intra-slice kernels, indexed as the intra policy's outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntraKernel {
    RoundRobin = 0,
    ProportionalFair = 1,
    MaxThroughput = 2,
}

impl IntraKernel {
    pub const ALL: [IntraKernel; 3] = [Self::RoundRobin, Self::ProportionalFair, Self::MaxThroughput];

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::RoundRobin => "rr",
            Self::ProportionalFair => "pf",
            Self::MaxThroughput => "mt",
        }
    }
}

/// Round robin over UEs, remainder rotating with `step`.
pub fn intra_rr(rbgs: usize, ue_count: usize, step: usize) -> Vec<usize> {
    equal_split(&vec![true; ue_count], rbgs, step)
}

/// Proportional fair over UEs.
pub fn intra_pf(rbgs: usize, buffered_packets: &[f64], avg_throughput: &[f64]) -> Vec<usize> {
    let mask = vec![true; buffered_packets.len()];
    inter_mapf(buffered_packets, avg_throughput, &mask, rbgs)
}

/// Bits one RBG carries in one TTI at spectral efficiency `se`.
pub fn rbg_bits(se: f64, bandwidth_hz: f64) -> f64 {
    bandwidth_hz / RB_COUNT as f64 * RBS_PER_RBG as f64 * se * TTI_S
}

/// Max throughput: best mean SE first, each UE capped at the RBGs its
/// buffer needs. Leftover RBGs go to the best backlogged UE (or the best UE
/// overall when every buffer is empty).
pub fn intra_mt(rbgs: usize, ue_se: &[f64], buffer_bits: &[f64], bandwidth_hz: f64) -> Vec<usize> {
    let n = ue_se.len();
    assert_eq!(n, buffer_bits.len());
    let mut out = vec![0; n];
    if n == 0 {
        return out;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| ue_se[b].total_cmp(&ue_se[a]).then(a.cmp(&b)));
    let mut left = rbgs;
    for &u in &order {
        if left == 0 {
            break;
        }
        if buffer_bits[u] <= 0.0 {
            continue;
        }
        let per = rbg_bits(ue_se[u], bandwidth_hz);
        let need = if per > 0.0 {
            (buffer_bits[u] / per).ceil().min(rbgs as f64) as usize
        } else {
            0
        };
        let give = need.min(left);
        out[u] += give;
        left -= give;
    }
    if left > 0 {
        let best = order
            .iter()
            .copied()
            .find(|&u| buffer_bits[u] > 0.0)
            .unwrap_or(order[0]);
        out[best] += left;
    }
    out
}

/// Intent-aware baseline reward: priority-weighted sum of negative drifts.
pub fn intent_aware_reward(slices: &[(bool, Drifts)], hp_weight: f64) -> f64 {
    let w = |hp: bool| if hp { hp_weight } else { 1.0 };
    let den: f64 = slices.iter().map(|&(hp, _)| w(hp)).sum();
    if den == 0.0 {
        return 0.0;
    }
    slices
        .iter()
        .map(|&(hp, d)| w(hp) * d.iter().map(|x| x.min(0.0)).sum::<f64>())
        .sum::<f64>()
        / den
}

/// Slice classes used by the sched-slicing baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SliceClass {
    pub urllc: bool,
    pub embb: bool,
}

pub fn classify(spec: &SliceSpec) -> SliceClass {
    SliceClass {
        urllc: spec.lat_req.is_some_and(|l| l < 20.0),
        embb: spec.thr_req.is_some_and(|t| t > 20.0),
    }
}

/// Sched-slicing reward: eMBB served throughput minus URLLC buffered bits.
pub fn sched_slicing_reward(slices: &[(&SliceSpec, &SliceMetrics)]) -> f64 {
    slices
        .iter()
        .map(|&(spec, m)| {
            let c = classify(spec);
            let mut r = 0.0;
            if c.embb {
                r += m.served;
            }
            if c.urllc {
                r -= m.buffer_occ * spec.buffer_capacity as f64 * f64::from(spec.packet_size);
            }
            r
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::default_catalog;

    const ALL5: [bool; 5] = [true; 5];

    #[test]
    fn chi_examples() {
        let m3 = [true, true, true];
        assert_eq!(chi_allocate(&[0.0, 0.0, 0.0], &m3, 27), vec![9, 9, 9]);
        assert_eq!(chi_allocate(&[1.0, -1.0, 0.0], &m3, 27), vec![18, 0, 9]);
        assert_eq!(chi_allocate(&[-1.0, -1.0, -1.0], &m3, 27), vec![9, 9, 9]);
        assert_eq!(chi_allocate(&[-1.0; 5], &ALL5, 27), vec![6, 6, 5, 5, 5]);
    }

    #[test]
    fn chi_fixup_order() {
        // Shares 1/3 each of 10 -> 3.33 rounds to 3,3,3; one to add, to slot 0.
        assert_eq!(chi_allocate(&[0.0; 3], &[true; 3], 10), vec![4, 3, 3]);
        // Shares of 5 over four equal slots -> 1.25 -> 1 each; add to 0.
        assert_eq!(chi_allocate(&[0.0; 4], &[true; 4], 5), vec![2, 1, 1, 1]);
        // 2.5 each rounds to 3; remove from lowest indices first.
        assert_eq!(chi_allocate(&[0.0; 4], &[true; 4], 10), vec![2, 2, 3, 3]);
    }

    #[test]
    fn chi_masks_inactive() {
        let m = [true, false, true, true, false];
        let a = chi_allocate(&[0.3, 1.0, -0.2, 0.9, 1.0], &m, 27);
        assert_eq!(a.iter().sum::<usize>(), 27);
        assert_eq!((a[1], a[4]), (0, 0));
    }

    #[test]
    fn marr_examples() {
        assert_eq!(inter_marr(&[true, true, true, false, false], 27, 0), vec![9, 9, 9, 0, 0]);
        let a = inter_marr(&[true, true, true, true, false], 27, 3);
        assert_eq!(a.iter().sum::<usize>(), 27);
        assert!(a[..4].iter().all(|&x| x == 6 || x == 7));
        let a = inter_marr(&ALL5, 27, 1);
        assert!(a.iter().all(|&x| x == 5 || x == 6));
        assert_eq!(a, vec![5, 6, 6, 5, 5]);
    }

    #[test]
    fn mapf_examples() {
        let m = [true, true, true];
        assert_eq!(inter_mapf(&[4.0, 4.0, 4.0], &[2.0, 2.0, 2.0], &m, 27), vec![9, 9, 9]);
        assert_eq!(pf_factor(8.0, 2.0), 2.0 * pf_factor(4.0, 2.0));
        assert_eq!(inter_mapf(&[0.0; 3], &[1.0; 3], &m, 27), vec![9, 9, 9]);
    }

    #[test]
    fn rr_examples() {
        assert_eq!(intra_rr(9, 3, 0), vec![3, 3, 3]);
        assert_eq!(intra_rr(10, 3, 0), vec![4, 3, 3]);
        assert_eq!(intra_rr(10, 3, 1), vec![3, 4, 3]);
        assert_eq!(intra_rr(0, 3, 5), vec![0, 0, 0]);
    }

    #[test]
    fn pf_examples() {
        assert_eq!(intra_pf(9, &[2.0; 3], &[1.0; 3]), vec![3, 3, 3]);
        let a = intra_pf(9, &[5.0, 0.0, 5.0], &[1.0; 3]);
        assert_eq!(a[1], 0);
        assert_eq!(a.iter().sum::<usize>(), 9);
    }

    #[test]
    fn mt_examples() {
        assert_eq!(intra_mt(7, &[3.0], &[1e9], 100e6), vec![7]);
        assert_eq!(intra_mt(7, &[4.0, 2.0], &[1e9, 1e9], 100e6), vec![7, 0]);
        // Best UE needs two RBGs' worth of bits.
        let per = rbg_bits(4.0, 100e6);
        assert_eq!(intra_mt(7, &[4.0, 2.0], &[1.5 * per, 1e9], 100e6), vec![2, 5]);
        // Empty buffer gets nothing while another UE is backlogged.
        assert_eq!(intra_mt(7, &[4.0, 2.0], &[0.0, 10.0], 100e6), vec![0, 7]);
    }

    #[test]
    fn intent_aware_examples() {
        let ok = Drifts {
            thr: Some(0.5),
            lat: Some(1.0),
            loss: None,
        };
        let bad = Drifts {
            thr: Some(-1.0),
            lat: None,
            loss: None,
        };
        assert_eq!(intent_aware_reward(&[(false, ok), (true, ok)], 2.0), 0.0);
        assert!((intent_aware_reward(&[(false, bad), (true, ok)], 2.0) + 1.0 / 3.0).abs() < 1e-12);
        let hp = intent_aware_reward(&[(true, bad), (false, ok)], 2.0);
        let lp = intent_aware_reward(&[(false, bad), (true, ok)], 2.0);
        assert!((hp / lp - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sched_slicing_examples() {
        let cat = default_catalog();
        let video = cat.iter().find(|s| s.name == "Video streaming 4K").unwrap();
        let cloud = cat.iter().find(|s| s.name == "Cloud gaming").unwrap();
        let m = |served, occ| SliceMetrics {
            served,
            buffer_occ: occ,
            ..Default::default()
        };
        let (a, b) = (m(10.0, 0.5), m(20.0, 0.5));
        assert_eq!(sched_slicing_reward(&[(video, &a), (cloud, &b)]), 30.0);

        let vr = cat.iter().find(|s| s.name == "VR gaming").unwrap();
        assert_eq!(classify(vr), SliceClass { urllc: true, embb: true });
        let mut urllc = vr.clone();
        urllc.thr_req = None;
        assert_eq!(sched_slicing_reward(&[(&urllc, &m(50.0, 0.0))]), 0.0);
    }
}
