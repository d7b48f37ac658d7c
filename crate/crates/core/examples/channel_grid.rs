//! UE mobility and the per-step, per-UE, per-RB spectral-efficiency grid,
//! saved to and reloaded from a trace file.
//!
//! `cargo run --release --example channel_grid`

use intent_rrs::channel::{generate_se_grid, load_se_grid, save_se_grid, simulate_mobility, ChannelParams, MobilityParams};
use intent_rrs::rng::{self, tag};
use intent_rrs::scenario::{default_catalog, NetworkScenario, ScenarioBounds};

fn main() {
    let s = NetworkScenario::from_seed(0, 0, &default_catalog(), ScenarioBounds::default()).unwrap();
    let steps = 1000;
    let traj = simulate_mobility(&s, &MobilityParams::default(), &mut rng::stream(s.seed, &[tag::MOBILITY, 0]), steps);
    let params = ChannelParams::default();
    let grid = generate_se_grid(&traj, &params, &mut rng::stream(s.seed, &[tag::CHANNEL, 0])).unwrap();

    println!("grid: {} UEs x {} RBs x {} steps", grid.ue_count(), grid.rb_count(), grid.step_count());
    for (u, t) in traj.iter().enumerate() {
        let mean: f64 = (0..steps).map(|k| grid.mean_se(k, u)).sum::<f64>() / steps as f64;
        println!(
            "UE {u:>2}: {:>5.1} km/h, start {:>5.1} m, moved {:>5.2} m, mean SE {:.2} bit/s/Hz",
            t.speed_kmh,
            t.radius(0),
            t.path_length(),
            mean
        );
    }

    let dir = std::env::temp_dir().join("intent-rrs-example");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grid.segrid");
    save_se_grid(&grid, &path).unwrap();
    assert_eq!(load_se_grid(&path).unwrap(), grid);
    println!("\ntrace written to {} and reloaded bit-exact", path.display());
}
