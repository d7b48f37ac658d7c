//! Random network scenarios from seeds, and the manifest file that pins them.
//!
//! `cargo run --example scenario_gen`

use intent_rrs::scenario::{default_catalog, manifest_from_json, manifest_to_json, NetworkScenario, ScenarioBounds};

fn main() {
    let cat = default_catalog();
    let scenarios: Vec<NetworkScenario> = (0..6)
        .map(|i| NetworkScenario::from_seed(i, u64::from(i), &cat, ScenarioBounds::default()).unwrap())
        .collect();
    for s in &scenarios {
        println!(
            "scenario {} ({} slices, {} UEs, {} high-priority)",
            s.scenario_id,
            s.active_count(),
            s.total_ues(),
            s.high_priority_count()
        );
        for sl in &s.slices {
            println!(
                "  position {}: {:<20} {:>2} UEs{}",
                sl.index,
                sl.spec.name,
                sl.ue_count,
                if sl.spec.high_priority { "  [hp]" } else { "" }
            );
        }
    }
    let again = NetworkScenario::from_seed(3, 3, &cat, ScenarioBounds::default()).unwrap();
    assert_eq!(again, scenarios[3], "same seed, same scenario");
    let json = manifest_to_json(&scenarios);
    assert_eq!(manifest_from_json(&json).unwrap(), scenarios);
    println!("\nmanifest: {} bytes, round-trips", json.len());
}
