//! The slice-type catalog: requirements, priorities and which intents each
//! type carries.
//!
//! `cargo run --example catalog`

use intent_rrs::scenario::{catalog_to_json, default_catalog, parse_catalog};

fn main() {
    let cat = default_catalog();
    println!("{:<22} {:>3} {:>8} {:>8} {:>10} {:>6} {:>8}", "type", "hp", "thr", "lat", "loss", "ues", "traffic");
    for s in &cat {
        let f = s.intents();
        let opt = |v: Option<f64>, on: bool| match (v, on) {
            (Some(v), true) => format!("{v}"),
            _ => "-".into(),
        };
        println!(
            "{:<22} {:>3} {:>8} {:>8} {:>10} {:>3}-{:<2} {:>8}",
            s.name,
            if s.high_priority { "yes" } else { "" },
            opt(s.thr_req, f.thr),
            opt(s.lat_req, f.lat),
            s.loss_req().map_or("-".into(), |l| format!("{l:.0e}")),
            s.ue_min,
            s.ue_max,
            s.traffic_mean,
        );
    }
    // The JSON export is what `intent-rrs catalog` writes and reads back.
    let back = parse_catalog(&catalog_to_json(&cat)).expect("round trip");
    assert_eq!(back, cat);
    println!("\n{} types; JSON export round-trips.", cat.len());
}
