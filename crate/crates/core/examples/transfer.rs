//! Transfer learning: pretrain on three scenarios, then fine-tune on a new
//! one and compare with training from scratch.
//!
//! `cargo run --release --example transfer` (a few minutes).

use std::sync::Arc;

use intent_rrs::harness::env::EnvConfig;
use intent_rrs::harness::train::{finetune, train, EpisodeRef, TrainConfig};
use intent_rrs::scenario::{default_catalog, NetworkScenario, ScenarioBounds};

fn main() {
    let cfg = EnvConfig::default();
    let cat = default_catalog();
    let sc = |seed: u64| Arc::new(NetworkScenario::from_seed(seed as u32, seed, &cat, ScenarioBounds::default()).unwrap());
    let base_set = vec![sc(4), sc(5), sc(6)];
    let held = vec![sc(0)];

    let base_train: Vec<_> = (0..20).flat_map(|e| (0..3).map(move |s| EpisodeRef { scenario: s, episode: e })).collect();
    let base_val: Vec<_> = (0..3).map(|s| EpisodeRef { scenario: s, episode: 50 }).collect();
    let base_cfg = TrainConfig {
        epochs: 1,
        max_env_steps: Some(60_000),
        ..Default::default()
    };
    let base = train(&cfg, &base_set, &base_train, &base_val, &base_cfg, None).unwrap();

    let ep = |e| EpisodeRef { scenario: 0, episode: e };
    let tr: Vec<_> = (0..10).map(ep).collect();
    let va: Vec<_> = (50..53).map(ep).collect();
    let tc = TrainConfig {
        epochs: 5,
        max_env_steps: Some(50_000),
        seed: 100,
        ..Default::default()
    };
    let scratch = train(&cfg, &held, &tr, &va, &tc, None).unwrap();
    let tuned = finetune(&cfg, &held, &tr, &va, &tc, &base.best.to_checkpoint()).unwrap();

    println!("{:>7} {:>9} {:>9}", "steps", "scratch", "finetune");
    for (a, b) in scratch.validations.iter().zip(&tuned.validations) {
        println!("{:>7} {:>9.1} {:>9.1}", a.env_steps, a.mean_reward, b.mean_reward);
    }
    let best = scratch.best_validation().unwrap().mean_reward;
    let threshold = best - 0.1 * best.abs();
    println!(
        "\nsteps to reach {threshold:.1}: scratch {:?}, finetune {:?}",
        scratch.steps_to_reach(threshold),
        tuned.steps_to_reach(threshold)
    );
}
