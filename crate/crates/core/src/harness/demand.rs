//! RBs needed to carry a scenario's requested traffic.

use serde::Serialize;

use crate::channel::SeGrid;
use crate::scenario::NetworkScenario;
use crate::{RB_COUNT, TTI_S};

/// Floor applied to spectral efficiencies so a dead RB does not ask for
/// infinitely many RBs.
pub const SE_FLOOR: f64 = 1e-3;

/// RBs needed at one step, evaluated at the slices' minimum, average and
/// maximum spectral efficiency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DemandRow {
    pub step: usize,
    pub rbs_min_se: f64,
    pub rbs_avg_se: f64,
    pub rbs_max_se: f64,
}

/// Per step and slice: requested bits over one TTI divided by what one RB
/// carries at the slice's min/avg/max UE-RB SE, ceiled, summed over slices.
pub fn demand_analysis(scenario: &NetworkScenario, grid: &SeGrid, bandwidth_hz: f64) -> Vec<DemandRow> {
    let rb_bits = |se: f64| bandwidth_hz / RB_COUNT as f64 * se.max(SE_FLOOR) * TTI_S;
    let offsets = scenario.ue_offsets();
    (0..grid.step_count())
        .map(|t| {
            let mut row = DemandRow {
                step: t,
                rbs_min_se: 0.0,
                rbs_avg_se: 0.0,
                rbs_max_se: 0.0,
            };
            for (s, &o) in scenario.slices.iter().zip(&offsets) {
                let bits = s.ue_count as f64 * s.spec.traffic_mean * 1e6 * TTI_S;
                if bits == 0.0 {
                    continue;
                }
                let (mut lo, mut hi, mut sum) = (f64::INFINITY, 0f64, 0.0);
                for u in o..o + s.ue_count {
                    for &v in grid.row(t, u) {
                        let v = f64::from(v);
                        lo = lo.min(v);
                        hi = hi.max(v);
                        sum += v;
                    }
                }
                let avg = sum / (s.ue_count * grid.rb_count()) as f64;
                row.rbs_min_se += (bits / rb_bits(lo)).ceil();
                row.rbs_avg_se += (bits / rb_bits(avg)).ceil();
                row.rbs_max_se += (bits / rb_bits(hi)).ceil();
            }
            row
        })
        .collect()
}

/// Mean over steps of the average-SE requirement.
pub fn mean_demand(rows: &[DemandRow]) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    rows.iter().map(|r| r.rbs_avg_se).sum::<f64>() / rows.len() as f64
}

/// True when the scenario needs more RBs on average than the carrier has.
pub fn is_over_demand(rows: &[DemandRow]) -> bool {
    mean_demand(rows) > RB_COUNT as f64
}
