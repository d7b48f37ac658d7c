//! Train the proposed inter/intra-slice agent on an over-demand scenario,
//! save a checkpoint, and compare it with MARR and MAPF on test episodes.
//!
//! `cargo run --release --example train_agent` (about a minute).

use std::sync::Arc;

use intent_rrs::agent::checkpoint::{load_checkpoint, save_checkpoint};
use intent_rrs::harness::controller::{Controller, Learner};
use intent_rrs::harness::env::EnvConfig;
use intent_rrs::harness::eval::{aggregate, run_episode};
use intent_rrs::harness::train::{train, EpisodeRef, TrainConfig};
use intent_rrs::scenario::{default_catalog, NetworkScenario, ScenarioBounds};

fn main() {
    let cfg = EnvConfig::default();
    let s = Arc::new(NetworkScenario::from_seed(0, 0, &default_catalog(), ScenarioBounds::default()).unwrap());
    let ep = |e| EpisodeRef { scenario: 0, episode: e };
    let tc = TrainConfig {
        epochs: 5,
        max_env_steps: Some(50_000),
        ..Default::default()
    };
    let out = train(&cfg, &[s.clone()], &(0..10).map(ep).collect::<Vec<_>>(), &(50..53).map(ep).collect::<Vec<_>>(), &tc, None).unwrap();
    for v in &out.validations {
        println!("after {:>6} steps: validation reward {:>8.1}", v.env_steps, v.mean_reward);
    }

    let path = std::env::temp_dir().join("intent-rrs-example-best.ckpt");
    save_checkpoint(&out.best.to_checkpoint(), &path).unwrap();
    let agent = Learner::from_checkpoint(&load_checkpoint(&path).unwrap(), &tc.ppo).unwrap();

    let mut rows = Vec::new();
    for c in [Controller::Greedy(&agent), Controller::Marr, Controller::Mapf] {
        for e in 100..105 {
            rows.push(run_episode(&s, e, &cfg, c, false).unwrap().summary);
        }
    }
    println!();
    for t in aggregate(&rows) {
        println!("{:<9} hp violations {:>7.1}  all violations {:>7.1}", t.controller, t.violations_hp, t.violations_total);
    }
}
