//! Intent drift: how far each metric sits from its requirement, and how the
//! drifts of a step become the inter- and intra-slice rewards.
//!
//! `cargo run --example intent_drift`

use intent_rrs::agent::reward::{inter_reward, intra_reward};
use intent_rrs::intent::{drift_latency, drift_packet_loss, drift_throughput, Drifts};
use intent_rrs::OVERFULFILLMENT_RATE as Z;

fn main() {
    println!("throughput, req 10 Mbps, backlog present:");
    for e in [0.0, 5.0, 10.0, 10.5, 11.0, 20.0] {
        println!("  {e:>5} Mbps -> {:+.3}", drift_throughput(e, 10.0, Z, 1.0));
    }
    println!("  a drained buffer counts as fulfilled: {:+.3}", drift_throughput(3.0, 10.0, Z, 0.0));

    println!("latency, req 10 ms, buffer limit 20 ms:");
    for l in [0.0, 5.0, 9.0, 10.0, 15.0, 20.0] {
        println!("  {l:>5} ms -> {:+.3}", drift_latency(l, 10.0, 20.0, Z));
    }
    println!("packet loss, req 1e-3:");
    for p in [0.0, 5e-4, 1e-3, 5e-3, 1.0] {
        println!("  {p:>7.0e} -> {:+.3}", drift_packet_loss(p, 1e-3, Z));
    }

    let d = |thr: f64, lat: Option<f64>| Drifts {
        thr: Some(thr),
        lat,
        loss: None,
    };
    println!("\nintra reward is the worst active drift: {:+.2}", intra_reward(&d(0.4, Some(-0.2))));
    for (label, slices) in [
        ("all fulfilled", vec![(true, d(0.5, None)), (false, d(0.7, None))]),
        ("regular slice short", vec![(true, d(0.5, None)), (false, d(-0.3, None))]),
        ("high-priority slice short", vec![(true, d(-0.4, None)), (false, d(0.9, None))]),
    ] {
        let (r, case) = inter_reward(&slices);
        println!("inter reward, {label:<26} {r:+.2} ({case:?})");
    }
}
