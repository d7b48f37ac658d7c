//! Intent-driven radio resource scheduling for RAN slicing.
//!
//! The crate simulates a single base station serving up to five slices over
//! 27 resource block groups per 1 ms TTI. Slices carry throughput, latency and
//! packet-loss intents; the scheduler's job is to keep them fulfilled, and to
//! protect high-priority slices first when capacity runs out.
//!
//! Layout, bottom-up:
//!
//! - [`scenario`]: slice-type catalog and random network scenarios.
//! - [`channel`]: UE mobility and the per-step, per-UE, per-RB spectral
//!   efficiency grid (synthetic generator or trace files).
//! - [`simnet`]: per-TTI traffic, buffers, throughput and slice metrics.
//! - [`intent`]: intent drift, fulfillment checks and violation accounting.
//! - [`sched`]: action-to-RBG mapping and the round-robin, proportional-fair
//!   and max-throughput kernels, plus baseline reward functions.
//! - [`agent`]: observations, rewards, actor-critic networks, PPO and GAE.
//! - [`harness`]: episodes, training/fine-tuning protocols, demand analysis
//!   and evaluation summaries.
//! - [`cli`]: the `intent-rrs` command-line front end.
//!
//! Runnable walkthroughs of each capability live in `examples/`.

pub mod agent;
pub mod channel;
pub mod cli;
pub mod harness;
pub mod intent;
pub mod rng;
pub mod scenario;
pub mod sched;
pub mod simnet;

/// Number of resource blocks in the carrier.
pub const RB_COUNT: usize = 135;
/// Number of resource block groups (the scheduling unit).
pub const RBG_COUNT: usize = 27;
/// Resource blocks per group.
pub const RBS_PER_RBG: usize = RB_COUNT / RBG_COUNT;
/// Maximum number of simultaneously configured slices.
pub const MAX_SLICES: usize = 5;
/// Maximum number of UEs attached to the base station.
pub const MAX_UES: usize = 25;
/// Maximum UEs of any single slice, used for padding.
pub const MAX_UES_PER_SLICE: usize = 5;
/// TTI length in seconds.
pub const TTI_S: f64 = 1e-3;
/// Over-fulfillment rate used by the intent drift.
pub const OVERFULFILLMENT_RATE: f64 = 0.1;
/// Packet-loss window length in steps.
pub const LOSS_WINDOW: usize = 10;
