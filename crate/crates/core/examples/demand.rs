//! RBs each scenario needs to carry its requested traffic, at the minimum,
//! average and maximum spectral efficiency of its UEs.
//!
//! `cargo run --release --example demand`

use intent_rrs::harness::demand::{demand_analysis, is_over_demand, mean_demand};
use intent_rrs::harness::env::{episode_grid, EnvConfig};
use intent_rrs::scenario::{default_catalog, NetworkScenario, ScenarioBounds};
use intent_rrs::RB_COUNT;

fn main() {
    let cfg = EnvConfig::default();
    let cat = default_catalog();
    let mut all = Vec::new();
    for seed in 0..20u64 {
        let s = NetworkScenario::from_seed(seed as u32, seed, &cat, ScenarioBounds::default()).unwrap();
        let rows = demand_analysis(&s, &episode_grid(&s, 0, &cfg).unwrap(), cfg.channel.bandwidth_hz());
        let avg = |f: fn(&intent_rrs::harness::demand::DemandRow) -> f64| rows.iter().map(f).sum::<f64>() / rows.len() as f64;
        println!(
            "scenario {seed:>2}: RBs at max SE {:>6.1}, avg SE {:>6.1}, min SE {:>9.1}{}",
            avg(|r| r.rbs_max_se),
            mean_demand(&rows),
            avg(|r| r.rbs_min_se),
            if is_over_demand(&rows) { "  over demand" } else { "" }
        );
        all.push(mean_demand(&rows));
    }
    all.sort_by(f64::total_cmp);
    println!(
        "\nlowest {:.0}, median {:.0}, highest {:.0} RBs (carrier has {RB_COUNT})",
        all[0],
        all[all.len() / 2],
        all[all.len() - 1]
    );
}
