//! Experiment harness: environment wrapper, controllers, training,
//! evaluation and output files.

pub mod controller;
pub mod demand;
pub mod env;
pub mod eval;
pub mod experiment;
pub mod io;
pub mod train;

use thiserror::Error;

use crate::agent::checkpoint::CheckpointError;
use crate::agent::ppo::PpoError;
use crate::channel::ChannelError;
use crate::scenario::ScenarioError;
use crate::simnet::SimError;

pub use controller::{Controller, ControllerKind, Learner};
pub use env::{Env, EnvConfig};
pub use experiment::{ExperimentConfig, Mode};
pub use eval::{run_episode, EpisodeRun, EpisodeSummary, StepRecord};
pub use train::{finetune, train, EpisodeRef, TrainConfig, TrainOutcome};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Ppo(#[from] PpoError),
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("config: {0}")]
    Config(String),
}
