//! Per-TTI network core: traffic, buffers, throughput and slice metrics.
//!
//! Packets are tracked as integer counts per age, so conservation
//! (`arrived = sent + dropped + buffered`) holds exactly. One step runs in
//! this order: transmit oldest-first under the step's capacity, age the
//! remaining packets and drop those past `l_max`, then admit the step's
//! arrivals up to the buffer capacity.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use thiserror::Error;

use crate::channel::SeGrid;
use crate::scenario::{NetworkScenario, SliceSpec};
use crate::{LOSS_WINDOW, MAX_SLICES, RBG_COUNT, RBS_PER_RBG, RB_COUNT, TTI_S};

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("rbg index {0} out of range")]
    RbgOutOfRange(usize),
    #[error("invalid allocation: {0}")]
    Allocation(String),
    #[error("slice has no UEs")]
    EmptySlice,
    #[error("grid mismatch: {0}")]
    Grid(String),
    #[error("episode finished after {0} steps")]
    EpisodeOver(usize),
}

/// RB indices of one RBG.
pub fn rbg_to_rbs(rbg: usize) -> Result<std::ops::Range<usize>, SimError> {
    if rbg >= RBG_COUNT {
        return Err(SimError::RbgOutOfRange(rbg));
    }
    Ok(rbg * RBS_PER_RBG..(rbg + 1) * RBS_PER_RBG)
}

/// Poisson packet arrivals for one UE over one TTI.
pub fn draw_arrivals<R: Rng + ?Sized>(rng: &mut R, spec: &SliceSpec) -> u64 {
    let mean = spec.mean_packets_per_tti();
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng) as u64
}

/// Packet capacity of a set of RBs over one TTI: whole packets only.
pub fn served_packets(se_sum: f64, bandwidth_hz: f64, rb_count: usize, packet_size: u32) -> u64 {
    let bits = bandwidth_hz / rb_count as f64 * se_sum * TTI_S;
    (bits / f64::from(packet_size)).floor().max(0.0) as u64
}

/// Served throughput in Mbps: the packet-quantized capacity of `rbs`.
pub fn served_throughput(
    rbs: impl IntoIterator<Item = usize>,
    se_row: &[f32],
    bandwidth_hz: f64,
    packet_size: u32,
) -> f64 {
    let se_sum: f64 = rbs.into_iter().map(|g| f64::from(se_row[g])).sum();
    let pk = served_packets(se_sum, bandwidth_hz, se_row.len(), packet_size);
    packets_to_mbps(pk, packet_size)
}

/// Effective throughput: served rate capped by the buffer's one-TTI rate.
pub fn effective_throughput(served_mbps: f64, buffer_bits: f64, tti_s: f64) -> f64 {
    served_mbps.min(buffer_bits / (tti_s * 1e6))
}

pub fn packets_to_mbps(packets: u64, packet_size: u32) -> f64 {
    packets as f64 * f64::from(packet_size) / (TTI_S * 1e6)
}

/// Mean age of buffered packets in TTIs (= ms); 0 for an empty buffer.
pub fn avg_buffer_latency(ages: &[u64]) -> f64 {
    let n: u64 = ages.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let w: f64 = ages.iter().enumerate().map(|(i, &c)| i as f64 * c as f64).sum();
    w / n as f64
}

/// Windowed packet-loss rate at step `n` (1-based) from full histories.
///
/// `occupancy[k-1]` is the buffer content at the start of step `k`, before
/// transmission; `arrivals` and `drops` are per-step packet counts. The window
/// is steps `max(1, n-w)..=n`. Returns 0 when nothing entered the window.
pub fn packet_loss_rate(occupancy: &[u64], arrivals: &[u64], drops: &[u64], n: usize, w: usize) -> f64 {
    assert!(n >= 1 && n <= arrivals.len() && n <= drops.len() && n <= occupancy.len());
    let start = n.saturating_sub(w).max(1);
    let d: u64 = drops[start - 1..n].iter().sum();
    let den = occupancy[start - 1] + arrivals[start - 1..n].iter().sum::<u64>();
    if den == 0 {
        0.0
    } else {
        d as f64 / den as f64
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct WindowEntry {
    occupancy: u64,
    arrivals: u64,
    drops: u64,
}

/// Rolling version of [`packet_loss_rate`] keeping only `w + 1` steps.
#[derive(Debug, Clone)]
pub struct LossWindow {
    w: usize,
    entries: VecDeque<WindowEntry>,
}

impl LossWindow {
    pub fn new(w: usize) -> Self {
        Self {
            w,
            entries: VecDeque::with_capacity(w + 2),
        }
    }

    pub fn push(&mut self, occupancy: u64, arrivals: u64, drops: u64) {
        self.entries.push_back(WindowEntry {
            occupancy,
            arrivals,
            drops,
        });
        while self.entries.len() > self.w + 1 {
            self.entries.pop_front();
        }
    }

    pub fn rate(&self) -> f64 {
        let Some(first) = self.entries.front() else {
            return 0.0;
        };
        let d: u64 = self.entries.iter().map(|e| e.drops).sum();
        let den = first.occupancy + self.entries.iter().map(|e| e.arrivals).sum::<u64>();
        if den == 0 {
            0.0
        } else {
            d as f64 / den as f64
        }
    }
}

/// Outcome of one [`UeBuffer::step`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BufferStep {
    pub occupancy_before: u64,
    pub sent: u64,
    /// Packets left right after transmission, before aging and admission.
    pub residual: u64,
    pub aged_out: u64,
    pub overflow: u64,
    pub admitted: u64,
}

impl BufferStep {
    pub fn dropped(&self) -> u64 {
        self.aged_out + self.overflow
    }
}

/// Packet counts by age for one UE.
#[derive(Debug, Clone, PartialEq)]
pub struct UeBuffer {
    /// `ages[i]` = packets that have waited `i` TTIs, `i` in `0..=l_max`.
    ages: Vec<u64>,
    capacity: u64,
    packet_size: u32,
    len: u64,
}

impl UeBuffer {
    pub fn new(capacity: u64, max_latency: u32, packet_size: u32) -> Self {
        Self {
            ages: vec![0; max_latency as usize + 1],
            capacity,
            packet_size,
            len: 0,
        }
    }

    pub fn for_spec(spec: &SliceSpec) -> Self {
        Self::new(spec.buffer_capacity, spec.max_buffer_latency, spec.packet_size)
    }

    /// Builds a buffer from an explicit age histogram of `l_max + 1` slots.
    pub fn with_ages(capacity: u64, packet_size: u32, ages: Vec<u64>) -> Self {
        assert!(!ages.is_empty(), "age histogram needs at least one slot");
        let len = ages.iter().sum();
        assert!(len <= capacity, "histogram exceeds capacity");
        Self {
            ages,
            capacity,
            packet_size,
            len,
        }
    }

    pub fn ages(&self) -> &[u64] {
        &self.ages
    }
    pub fn len(&self) -> u64 {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
    pub fn capacity(&self) -> u64 {
        self.capacity
    }
    pub fn packet_size(&self) -> u32 {
        self.packet_size
    }
    pub fn bits(&self) -> f64 {
        self.len as f64 * f64::from(self.packet_size)
    }
    pub fn occupancy(&self) -> f64 {
        self.len as f64 / self.capacity as f64
    }
    pub fn avg_latency(&self) -> f64 {
        avg_buffer_latency(&self.ages)
    }

    /// Transmits up to `capacity_packets`, ages, drops and admits `arrivals`.
    pub fn step(&mut self, capacity_packets: u64, arrivals: u64) -> BufferStep {
        let occupancy_before = self.len;
        let mut budget = capacity_packets;
        for slot in self.ages.iter_mut().rev() {
            if budget == 0 {
                break;
            }
            let take = (*slot).min(budget);
            *slot -= take;
            budget -= take;
        }
        let sent = capacity_packets - budget;
        self.len -= sent;
        let residual = self.len;

        let l_max = self.ages.len() - 1;
        let aged_out = self.ages[l_max];
        self.ages.rotate_right(1);
        self.ages[0] = 0;
        self.len -= aged_out;

        let admitted = arrivals.min(self.capacity - self.len);
        self.ages[0] = admitted;
        self.len += admitted;
        BufferStep {
            occupancy_before,
            sent,
            residual,
            aged_out,
            overflow: arrivals - admitted,
            admitted,
        }
    }
}

/// Per-UE metrics of one step.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UeMetrics {
    /// Served throughput, Mbps.
    pub served: f64,
    /// Effective throughput, Mbps.
    pub effective: f64,
    /// Buffer occupancy fraction after admission.
    pub buffer_occ: f64,
    /// Average buffer latency, ms.
    pub latency: f64,
    pub loss: f64,
    /// Requested traffic this step, Mbps.
    pub arrived: f64,
    /// Mean SE over all RBs this step.
    pub mean_se: f64,
    /// True when transmission emptied the buffer.
    pub drained: bool,
    pub rbgs: usize,
    pub arrived_packets: u64,
    pub sent_packets: u64,
    pub dropped_packets: u64,
}

/// Slice-level means of [`UeMetrics`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SliceMetrics {
    pub served: f64,
    pub effective: f64,
    pub buffer_occ: f64,
    pub latency: f64,
    pub loss: f64,
    pub arrived: f64,
    pub mean_se: f64,
}

/// Arithmetic mean of each metric over a slice's UEs.
pub fn slice_aggregate(ues: &[UeMetrics]) -> Result<SliceMetrics, SimError> {
    if ues.is_empty() {
        return Err(SimError::EmptySlice);
    }
    let n = ues.len() as f64;
    let mean = |f: fn(&UeMetrics) -> f64| ues.iter().map(f).sum::<f64>() / n;
    Ok(SliceMetrics {
        served: mean(|u| u.served),
        effective: mean(|u| u.effective),
        buffer_occ: mean(|u| u.buffer_occ),
        latency: mean(|u| u.latency),
        loss: mean(|u| u.loss),
        arrived: mean(|u| u.arrived),
        mean_se: mean(|u| u.mean_se),
    })
}

/// RBG counts for one step.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Allocation {
    /// RBGs per slice position (position 1 at element 0).
    pub inter: [usize; MAX_SLICES],
    /// Per active slice (scenario order), RBGs per UE.
    pub intra: Vec<Vec<usize>>,
}

impl Allocation {
    pub fn validate(&self, scenario: &NetworkScenario) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::Allocation(m));
        let total: usize = self.inter.iter().sum();
        if total != RBG_COUNT {
            return bad(format!("inter allocation sums to {total}"));
        }
        let mask = scenario.active_mask();
        for (i, (&n, &on)) in self.inter.iter().zip(&mask).enumerate() {
            if !on && n != 0 {
                return bad(format!("inactive slice {} granted {n}", i + 1));
            }
        }
        if self.intra.len() != scenario.slices.len() {
            return bad("intra allocation does not cover active slices".into());
        }
        for (s, grant) in scenario.slices.iter().zip(&self.intra) {
            if grant.len() != s.ue_count {
                return bad(format!("slice {} has {} UE entries", s.index, grant.len()));
            }
            let sum: usize = grant.iter().sum();
            if sum != self.inter[s.index - 1] {
                return bad(format!(
                    "slice {} intra sums to {sum}, inter grant {}",
                    s.index,
                    self.inter[s.index - 1]
                ));
            }
        }
        Ok(())
    }

    /// First RBG of every UE's contiguous block: slices in position order,
    /// UEs in order within each slice.
    pub fn ue_rbg_ranges(&self, scenario: &NetworkScenario) -> Vec<std::ops::Range<usize>> {
        let mut next = 0;
        let mut out = Vec::with_capacity(scenario.total_ues());
        for grant in &self.intra {
            for &n in grant {
                out.push(next..next + n);
                next += n;
            }
        }
        out
    }
}

/// Everything observed about one step.
#[derive(Debug, Clone, Default)]
pub struct StepMetrics {
    pub step: usize,
    /// Global UE order (see [`NetworkScenario::ue_layout`]).
    pub ues: Vec<UeMetrics>,
    /// Scenario slice order.
    pub slices: Vec<SliceMetrics>,
}

/// Smoothing factor of the average-throughput trackers.
pub const THROUGHPUT_EMA: f64 = 0.01;
/// Initial value of the average-throughput trackers, Mbps.
pub const THROUGHPUT_EMA_INIT: f64 = 1e-6;

/// One base station running one episode over a fixed SE grid.
#[derive(Debug, Clone)]
pub struct SimNet {
    scenario: Arc<NetworkScenario>,
    grid: Arc<SeGrid>,
    bandwidth_hz: f64,
    buffers: Vec<UeBuffer>,
    windows: Vec<LossWindow>,
    layout: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    step: usize,
    ue_avg_thr: Vec<f64>,
    slice_avg_thr: Vec<f64>,
    last: StepMetrics,
    totals: Vec<Conservation>,
}

/// Cumulative packet counters of one UE.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Conservation {
    pub arrived: u64,
    pub sent: u64,
    pub dropped: u64,
}

impl SimNet {
    pub fn new(
        scenario: Arc<NetworkScenario>,
        grid: Arc<SeGrid>,
        bandwidth_hz: f64,
    ) -> Result<Self, SimError> {
        if grid.ue_count() != scenario.total_ues() {
            return Err(SimError::Grid(format!(
                "grid has {} UEs, scenario {}",
                grid.ue_count(),
                scenario.total_ues()
            )));
        }
        if grid.rb_count() != RB_COUNT {
            return Err(SimError::Grid(format!("grid has {} RBs", grid.rb_count())));
        }
        let layout = scenario.ue_layout();
        let buffers = layout
            .iter()
            .map(|&(k, _)| UeBuffer::for_spec(&scenario.slices[k].spec))
            .collect();
        let n_ue = layout.len();
        let mut sim = Self {
            offsets: scenario.ue_offsets(),
            windows: vec![LossWindow::new(LOSS_WINDOW); n_ue],
            ue_avg_thr: vec![THROUGHPUT_EMA_INIT; n_ue],
            slice_avg_thr: vec![THROUGHPUT_EMA_INIT; scenario.slices.len()],
            totals: vec![Conservation::default(); n_ue],
            buffers,
            layout,
            step: 0,
            last: StepMetrics::default(),
            scenario,
            grid,
            bandwidth_hz,
        };
        sim.last = sim.idle_metrics();
        Ok(sim)
    }

    fn idle_metrics(&self) -> StepMetrics {
        let ues: Vec<UeMetrics> = (0..self.layout.len())
            .map(|u| UeMetrics {
                mean_se: self.grid.mean_se(0, u),
                drained: true,
                ..Default::default()
            })
            .collect();
        let slices = self.slice_means(&ues);
        StepMetrics {
            step: 0,
            ues,
            slices,
        }
    }

    fn slice_means(&self, ues: &[UeMetrics]) -> Vec<SliceMetrics> {
        self.scenario
            .slices
            .iter()
            .zip(&self.offsets)
            .map(|(s, &o)| slice_aggregate(&ues[o..o + s.ue_count]).expect("slices have UEs"))
            .collect()
    }

    pub fn scenario(&self) -> &NetworkScenario {
        &self.scenario
    }
    pub fn grid(&self) -> &SeGrid {
        &self.grid
    }
    /// Steps completed so far.
    pub fn step_index(&self) -> usize {
        self.step
    }
    pub fn episode_len(&self) -> usize {
        self.grid.step_count()
    }
    pub fn is_done(&self) -> bool {
        self.step >= self.grid.step_count()
    }
    pub fn buffers(&self) -> &[UeBuffer] {
        &self.buffers
    }
    pub fn ue_offsets(&self) -> &[usize] {
        &self.offsets
    }
    /// Metrics of the most recent step (an idle snapshot before the first).
    pub fn last_metrics(&self) -> &StepMetrics {
        &self.last
    }
    pub fn ue_avg_throughput(&self) -> &[f64] {
        &self.ue_avg_thr
    }
    pub fn slice_avg_throughput(&self) -> &[f64] {
        &self.slice_avg_thr
    }
    pub fn conservation(&self) -> &[Conservation] {
        &self.totals
    }

    /// Mean SE per UE at the upcoming step, over all RBs.
    pub fn current_mean_se(&self) -> Vec<f64> {
        let t = self.step.min(self.grid.step_count() - 1);
        (0..self.layout.len()).map(|u| self.grid.mean_se(t, u)).collect()
    }

    /// Advances one TTI under `alloc`, drawing arrivals from `rng`.
    pub fn step<R: Rng + ?Sized>(&mut self, alloc: &Allocation, rng: &mut R) -> Result<&StepMetrics, SimError> {
        if self.is_done() {
            return Err(SimError::EpisodeOver(self.step));
        }
        alloc.validate(&self.scenario)?;
        let t = self.step;
        let ranges = alloc.ue_rbg_ranges(&self.scenario);
        let mut ues = Vec::with_capacity(self.layout.len());
        for (u, &(k, _)) in self.layout.iter().enumerate() {
            let spec = &self.scenario.slices[k].spec;
            let row = self.grid.row(t, u);
            let rb = ranges[u].start * RBS_PER_RBG..ranges[u].end * RBS_PER_RBG;
            let se_sum: f64 = row[rb].iter().map(|&v| f64::from(v)).sum();
            let cap = served_packets(se_sum, self.bandwidth_hz, RB_COUNT, spec.packet_size);
            let arrivals = draw_arrivals(rng, spec);
            let buf = &mut self.buffers[u];
            let out = buf.step(cap, arrivals);
            self.windows[u].push(out.occupancy_before, arrivals, out.dropped());
            let tot = &mut self.totals[u];
            tot.arrived += arrivals;
            tot.sent += out.sent;
            tot.dropped += out.dropped();
            let effective = packets_to_mbps(out.sent, spec.packet_size);
            ues.push(UeMetrics {
                served: packets_to_mbps(cap, spec.packet_size),
                effective,
                buffer_occ: buf.occupancy(),
                latency: buf.avg_latency(),
                loss: self.windows[u].rate(),
                arrived: packets_to_mbps(arrivals, spec.packet_size),
                mean_se: self.grid.mean_se(t, u),
                drained: out.residual == 0,
                rbgs: ranges[u].len(),
                arrived_packets: arrivals,
                sent_packets: out.sent,
                dropped_packets: out.dropped(),
            });
            self.ue_avg_thr[u] = (1.0 - THROUGHPUT_EMA) * self.ue_avg_thr[u] + THROUGHPUT_EMA * effective;
        }
        let slices = self.slice_means(&ues);
        for (avg, m) in self.slice_avg_thr.iter_mut().zip(&slices) {
            *avg = (1.0 - THROUGHPUT_EMA) * *avg + THROUGHPUT_EMA * m.effective;
        }
        self.step += 1;
        self.last = StepMetrics { step: t, ues, slices };
        Ok(&self.last)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::default_catalog;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec(name: &str) -> SliceSpec {
        default_catalog().into_iter().find(|s| s.name == name).unwrap()
    }

    #[test]
    fn rbg_mapping_partitions_rbs() {
        assert_eq!(rbg_to_rbs(0).unwrap(), 0..5);
        assert_eq!(rbg_to_rbs(26).unwrap(), 130..135);
        assert_eq!(rbg_to_rbs(27), Err(SimError::RbgOutOfRange(27)));
        let all: Vec<usize> = (0..27).flat_map(|g| rbg_to_rbs(g).unwrap()).collect();
        assert_eq!(all, (0..135).collect::<Vec<_>>());
    }

    #[test]
    fn zero_mean_traffic_never_arrives() {
        let mut s = spec("Video streaming 4K");
        s.traffic_mean = 0.0;
        let mut r = ChaCha8Rng::seed_from_u64(1);
        assert!((0..1000).all(|_| draw_arrivals(&mut r, &s) == 0));
    }

    #[test]
    fn arrival_mean_and_variance() {
        let s = spec("Robotic surgery case 1");
        assert!((s.mean_packets_per_tti() - 1.875).abs() < 1e-12);
        let mut r = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| draw_arrivals(&mut r, &s) as f64).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        assert!((mean / 1.875 - 1.0).abs() < 0.01, "{mean}");

        let mut s2 = s.clone();
        s2.traffic_mean = 10.0;
        s2.packet_size = 8192;
        let xs: Vec<f64> = (0..n).map(|_| draw_arrivals(&mut r, &s2) as f64).collect();
        let m = xs.iter().sum::<f64>() / n as f64;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((v / m - 1.0).abs() < 0.05, "{m} {v}");
    }

    #[test]
    fn served_throughput_examples() {
        let row = vec![2.0f32; 135];
        assert_eq!(served_throughput(std::iter::empty(), &row, 100e6, 16000), 0.0);
        // One RBG at SE 2 carries 100e6/135*10*1e-3 = 7407 bits: below one packet.
        assert_eq!(served_throughput(0..5, &row, 100e6, 16000), 0.0);
        let bits: f64 = 100e6 / 135.0 * 10.0 * 1e-3;
        assert_eq!(bits.floor() as u64, 7407);
        // Four RBGs: 29629 bits, one packet -> 16 Mbps.
        assert_eq!(served_throughput(0..20, &row, 100e6, 16000), 16.0);
        let row4 = vec![4.0f32; 135];
        assert!(served_throughput(0..20, &row4, 100e6, 16000) >= 16.0);
    }

    #[test]
    fn effective_throughput_examples() {
        assert_eq!(effective_throughput(10.0, 0.0, 1e-3), 0.0);
        assert_eq!(effective_throughput(10.0, f64::INFINITY, 1e-3), 10.0);
        assert_eq!(effective_throughput(10.0, 4000.0, 1e-3), 4.0);
    }

    #[test]
    fn buffer_step_examples() {
        let mut b = UeBuffer::new(10, 5, 100);
        let o = b.step(0, 0);
        assert_eq!((o.dropped(), b.len()), (0, 0));

        let mut b = UeBuffer::with_ages(10, 100, vec![10, 0, 0, 0, 0, 0]);
        let o = b.step(0, 3);
        assert_eq!(o.overflow, 3);
        assert_eq!(b.len(), 10);

        let mut b = UeBuffer::with_ages(100, 100, vec![0, 0, 0, 0, 0, 5]);
        let o = b.step(0, 0);
        assert_eq!(o.aged_out, 5);
        assert!(b.is_empty());
    }

    #[test]
    fn transmission_is_oldest_first() {
        let mut b = UeBuffer::with_ages(100, 100, vec![3, 2, 0, 4]);
        let o = b.step(5, 0);
        assert_eq!(o.sent, 5);
        // 4 at age 3 and 1 at age 1 leave; the rest ages by one.
        assert_eq!(b.ages(), &[0, 3, 1, 0]);
    }

    #[test]
    fn latency_examples() {
        assert_eq!(avg_buffer_latency(&[5, 0, 0]), 0.0);
        assert_eq!(avg_buffer_latency(&[0, 0, 0, 0, 2, 0, 2]), 5.0);
        assert_eq!(avg_buffer_latency(&[0, 0]), 0.0);
    }

    #[test]
    fn loss_rate_examples() {
        assert_eq!(packet_loss_rate(&[0, 0], &[1, 2], &[0, 0], 2, 10), 0.0);
        assert_eq!(packet_loss_rate(&[0, 0], &[3, 4], &[3, 4], 2, 10), 1.0);
        assert_eq!(packet_loss_rate(&[0], &[0], &[0], 1, 10), 0.0);
    }

    #[test]
    fn rolling_window_matches_full_history() {
        let mut r = ChaCha8Rng::seed_from_u64(9);
        let mut w = LossWindow::new(LOSS_WINDOW);
        let (mut occ, mut arr, mut drp) = (vec![], vec![], vec![]);
        for n in 1..=40 {
            let (o, a) = (r.random_range(0..20u64), r.random_range(0..20u64));
            let d = r.random_range(0..=a);
            occ.push(o);
            arr.push(a);
            drp.push(d);
            w.push(o, a, d);
            assert_eq!(w.rate(), packet_loss_rate(&occ, &arr, &drp, n, LOSS_WINDOW));
        }
    }

    #[test]
    fn slice_aggregate_means() {
        let a = UeMetrics {
            effective: 2.0,
            ..Default::default()
        };
        let b = UeMetrics {
            effective: 4.0,
            ..Default::default()
        };
        assert_eq!(slice_aggregate(&[a]).unwrap().effective, 2.0);
        assert_eq!(slice_aggregate(&[a, b]).unwrap().effective, 3.0);
        assert_eq!(slice_aggregate(&[]), Err(SimError::EmptySlice));
    }
}
