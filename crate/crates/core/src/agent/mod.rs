//! Learning agents: observations, rewards, networks, PPO and GAE.
//!
//! The proposed scheduler pairs one Gaussian inter-slice policy with one
//! categorical intra-slice policy whose parameters are shared by every
//! active slice's agent.

pub mod checkpoint;
pub mod gae;
pub mod nn;
pub mod obs;
pub mod policy;
pub mod ppo;
pub mod reward;
pub mod rollout;

pub use checkpoint::{load_checkpoint, save_checkpoint, CheckpointError, PolicyCheckpoint, TrainedNet};
pub use gae::gae;
pub use nn::{ActorCritic, NetShape};
pub use obs::{build_inter_obs, build_intra_obs, build_raw_obs, ObsConfig, INTER_OBS_LEN, INTRA_OBS_LEN, RAW_OBS_LEN};
pub use policy::{Action, HeadKind, Policy};
pub use ppo::{ppo_update, Adam, PpoConfig, PpoError, Sample, UpdateReport};
pub use reward::{inter_reward, intra_reward, RewardCase};
pub use rollout::{RolloutBuffer, Transition};
