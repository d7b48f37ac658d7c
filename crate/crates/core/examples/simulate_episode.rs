//! One episode driven by the MAPF baseline, with slice metrics and intent
//! status printed every 200 steps.
//!
//! `cargo run --release --example simulate_episode`

use std::sync::Arc;

use intent_rrs::harness::controller::{decide, Controller};
use intent_rrs::harness::env::{episode_grid, traffic_stream, Env, EnvConfig};
use intent_rrs::scenario::{default_catalog, NetworkScenario, ScenarioBounds};

fn main() {
    let cfg = EnvConfig::default();
    let s = Arc::new(NetworkScenario::from_seed(2, 2, &default_catalog(), ScenarioBounds::default()).unwrap());
    let grid = Arc::new(episode_grid(&s, 0, &cfg).unwrap());
    let mut env = Env::new(s.clone(), grid, traffic_stream(&s, 0, 0, 0), &cfg).unwrap();
    while !env.is_done() {
        let d = decide(&env, Controller::Mapf);
        let out = env.step(&d.alloc).unwrap();
        let t = env.step_index();
        if t % 200 == 0 {
            println!("step {t}: inter reward {:+.3}", out.inter_reward);
            for ((sl, m), i) in s.slices.iter().zip(&env.last_metrics().slices).zip(&out.intents) {
                println!(
                    "  {:<20} rbgs {:>2}  thr {:>7.2} Mbps  lat {:>5.1} ms  loss {:.1e}  drift {:+.2}{}",
                    sl.spec.name,
                    d.alloc.inter[sl.index - 1],
                    m.effective,
                    m.latency,
                    m.loss,
                    i.drift.min_active(),
                    if i.fulfillment.violated { "  VIOLATED" } else { "" }
                );
            }
        }
    }
    let c = env.sim().conservation();
    let (a, sent, dropped): (u64, u64, u64) =
        c.iter().fold((0, 0, 0), |acc, x| (acc.0 + x.arrived, acc.1 + x.sent, acc.2 + x.dropped));
    println!("\npackets: {a} arrived, {sent} sent, {dropped} dropped");
}
