//! Intent drift, fulfillment checks and violation accounting.
//!
//! A drift is a signed score in `[-1, 1]`: negative below the requirement,
//! zero exactly at it, graded from 0 to 1 inside the over-fulfillment band of
//! width `zeta * req`, and saturated at 1 beyond. Inactive intents are `None`
//! and are skipped by every min and mean.

use thiserror::Error;

use crate::scenario::{NetworkScenario, SliceSpec};
use crate::simnet::{StepMetrics, UeMetrics};
use crate::OVERFULFILLMENT_RATE;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntentError {
    #[error("cannot aggregate drifts of an empty slice")]
    EmptySlice,
}

/// Throughput drift. `buffer_occ` is the occupancy left after transmission:
/// with nothing left to send the slice is not held responsible (drift 1).
pub fn drift_throughput(e: f64, req: f64, zeta: f64, buffer_occ: f64) -> f64 {
    debug_assert!(req > 0.0 && zeta > 0.0 && zeta <= 1.0);
    let d = if buffer_occ > 0.0 && e < req {
        (e - req) / req
    } else if buffer_occ > 0.0 && e < req * (1.0 + zeta) {
        (e - req) / (req * zeta)
    } else {
        1.0
    };
    d.clamp(-1.0, 1.0)
}

/// Buffer-latency drift; `l_max` is the worst admissible latency.
pub fn drift_latency(lat: f64, req: f64, l_max: f64, zeta: f64) -> f64 {
    debug_assert!(req > 0.0 && req < l_max);
    let d = if lat > req {
        (req - lat) / (l_max - req)
    } else if lat > req * (1.0 - zeta) {
        (req - lat) / (req * zeta)
    } else {
        1.0
    };
    d.clamp(-1.0, 1.0)
}

/// Packet-loss drift.
pub fn drift_packet_loss(p: f64, req: f64, zeta: f64) -> f64 {
    debug_assert!(req > 0.0 && req < 1.0);
    let d = if p > req {
        (req - p) / (1.0 - req)
    } else if p > req * (1.0 - zeta) {
        (req - p) / (req * zeta)
    } else {
        1.0
    };
    d.clamp(-1.0, 1.0)
}

/// Drift per metric; `None` where the intent is inactive.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Drifts {
    pub thr: Option<f64>,
    pub lat: Option<f64>,
    pub loss: Option<f64>,
}

impl Drifts {
    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        [self.thr, self.lat, self.loss].into_iter().flatten()
    }

    /// Minimum over active drifts (1 if none are active).
    pub fn min_active(&self) -> f64 {
        self.iter().fold(1.0, f64::min)
    }

    pub fn any_negative(&self) -> bool {
        self.iter().any(|d| d < 0.0)
    }

    /// `[thr, lat, loss]` with inactive entries at 0.
    pub fn as_array(&self) -> [f64; 3] {
        [
            self.thr.unwrap_or(0.0),
            self.lat.unwrap_or(0.0),
            self.loss.unwrap_or(0.0),
        ]
    }
}

/// Drifts of one UE under its slice's intents.
pub fn ue_drifts(spec: &SliceSpec, m: &UeMetrics, zeta: f64) -> Drifts {
    let residual = if m.drained { 0.0 } else { m.buffer_occ.max(f64::MIN_POSITIVE) };
    Drifts {
        thr: spec.thr_req.map(|r| drift_throughput(m.effective, r, zeta, residual)),
        lat: spec
            .lat_req
            .map(|r| drift_latency(m.latency, r, f64::from(spec.max_buffer_latency), zeta)),
        loss: spec.loss_req().map(|r| drift_packet_loss(m.loss, r, zeta)),
    }
}

/// Slice drift: per-metric mean of the UE drifts.
pub fn slice_drift(ues: &[Drifts]) -> Result<Drifts, IntentError> {
    if ues.is_empty() {
        return Err(IntentError::EmptySlice);
    }
    let n = ues.len() as f64;
    let mean = |f: fn(&Drifts) -> Option<f64>| -> Option<f64> {
        let v: Vec<f64> = ues.iter().filter_map(f).collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / n)
    };
    Ok(Drifts {
        thr: mean(|d| d.thr),
        lat: mean(|d| d.lat),
        loss: mean(|d| d.loss),
    })
}

/// Slice means compared against the requirements.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FulfillmentInput {
    /// Mean throughput, with drained UEs credited at the requirement.
    pub throughput: f64,
    pub latency: f64,
    pub loss: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fulfillment {
    pub fulfilled: bool,
    pub violated: bool,
}

/// Every active intent met on the slice means (boundaries count as met).
pub fn check_fulfillment(m: &FulfillmentInput, spec: &SliceSpec) -> Fulfillment {
    let thr_ok = spec.thr_req.is_none_or(|r| m.throughput >= r);
    let lat_ok = spec.lat_req.is_none_or(|r| m.latency <= r);
    let loss_ok = spec.loss_req().is_none_or(|r| m.loss <= r);
    let fulfilled = thr_ok && lat_ok && loss_ok;
    Fulfillment {
        fulfilled,
        violated: !fulfilled,
    }
}

/// Slice means used by [`check_fulfillment`]. A UE whose buffer was drained
/// had nothing more to send, so its throughput counts as at least `req`.
pub fn fulfillment_input(spec: &SliceSpec, ues: &[UeMetrics]) -> FulfillmentInput {
    let n = ues.len().max(1) as f64;
    let credited = |u: &UeMetrics| match spec.thr_req {
        Some(r) if u.drained => u.effective.max(r),
        _ => u.effective,
    };
    FulfillmentInput {
        throughput: ues.iter().map(credited).sum::<f64>() / n,
        latency: ues.iter().map(|u| u.latency).sum::<f64>() / n,
        loss: ues.iter().map(|u| u.loss).sum::<f64>() / n,
    }
}

/// Sum over slices of `min(min active drift, 0)`; at most 0.
pub fn cv<'a>(group: impl IntoIterator<Item = &'a Drifts>) -> f64 {
    group.into_iter().map(|d| d.min_active().min(0.0)).sum()
}

/// Intent state of one active slice at one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceIntent {
    /// Slice position, 1-based.
    pub index: usize,
    pub high_priority: bool,
    pub drift: Drifts,
    pub fulfillment: Fulfillment,
}

/// Drifts and fulfillment of every active slice, in scenario order.
pub fn evaluate(scenario: &NetworkScenario, metrics: &StepMetrics, zeta: f64) -> Vec<SliceIntent> {
    let offsets = scenario.ue_offsets();
    scenario
        .slices
        .iter()
        .zip(offsets)
        .map(|(s, o)| {
            let ues = &metrics.ues[o..o + s.ue_count];
            let per_ue: Vec<Drifts> = ues.iter().map(|u| ue_drifts(&s.spec, u, zeta)).collect();
            SliceIntent {
                index: s.index,
                high_priority: s.spec.high_priority,
                drift: slice_drift(&per_ue).expect("slices have UEs"),
                fulfillment: check_fulfillment(&fulfillment_input(&s.spec, ues), &s.spec),
            }
        })
        .collect()
}

/// [`evaluate`] with the default over-fulfillment rate.
pub fn evaluate_default(scenario: &NetworkScenario, metrics: &StepMetrics) -> Vec<SliceIntent> {
    evaluate(scenario, metrics, OVERFULFILLMENT_RATE)
}
