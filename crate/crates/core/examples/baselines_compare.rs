//! The heuristic baselines on a low-demand and an over-demand scenario,
//! plus the three intra-slice kernels on a toy slice.
//!
//! `cargo run --release --example baselines_compare`

use std::sync::Arc;

use intent_rrs::harness::controller::Controller;
use intent_rrs::harness::demand::{demand_analysis, mean_demand};
use intent_rrs::harness::env::{episode_grid, EnvConfig};
use intent_rrs::harness::eval::{aggregate, run_episode};
use intent_rrs::scenario::{default_catalog, NetworkScenario, ScenarioBounds};
use intent_rrs::sched::{intra_mt, intra_pf, intra_rr};

fn main() {
    let cfg = EnvConfig::default();
    let cat = default_catalog();
    for seed in [1u64, 0] {
        let s = Arc::new(NetworkScenario::from_seed(seed as u32, seed, &cat, ScenarioBounds::default()).unwrap());
        let g = episode_grid(&s, 0, &cfg).unwrap();
        println!("scenario {seed}: about {:.0} RBs needed of 135", mean_demand(&demand_analysis(&s, &g, cfg.channel.bandwidth_hz())));
        let mut rows = Vec::new();
        for c in [Controller::Marr, Controller::Mapf] {
            for ep in 0..3 {
                rows.push(run_episode(&s, ep, &cfg, c, false).unwrap().summary);
            }
        }
        for t in aggregate(&rows) {
            println!(
                "  {:<5} violations {:>7.1} (hp {:>7.1})  distance {:>8.1} (hp {:>8.1})",
                t.controller, t.violations_total, t.violations_hp, t.distance_total, t.distance_hp
            );
        }
    }

    println!("\n8 RBGs over 3 UEs:");
    println!("  round robin       {:?}", intra_rr(8, 3, 1));
    println!("  proportional fair {:?}", intra_pf(8, &[30.0, 10.0, 0.0], &[5.0, 1.0, 1.0]));
    println!("  max throughput    {:?}", intra_mt(8, &[2.0, 6.0, 4.0], &[1e6, 2e4, 1e6], 100e6));
}
