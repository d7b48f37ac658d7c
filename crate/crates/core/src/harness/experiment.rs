//! Experiment protocols: how episodes are split into training, validation
//! and test sets, and the step budget that results.

use serde::{Deserialize, Serialize};

use super::train::EpisodeRef;
use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Train, validate and test on channel episodes of one scenario.
    Single,
    /// One episode per scenario; train, validation and test sets hold
    /// different scenarios.
    Generalize,
    /// One episode per scenario, the same episodes in every set.
    Overfit,
    /// As `Single`, from a base checkpoint; validation and test coincide.
    Finetune,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    /// Scenario index used by `single` and `finetune`.
    pub scenario: usize,
    pub ep_train: u32,
    pub ep_val: u32,
    pub ep_test: u32,
    pub epochs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::desk(Mode::Single)
    }
}

/// Episode references of each set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splits {
    pub train: Vec<EpisodeRef>,
    pub val: Vec<EpisodeRef>,
    pub test: Vec<EpisodeRef>,
}

impl ExperimentConfig {
    /// Full-size protocols.
    pub fn full(mode: Mode) -> Self {
        let (ep_train, ep_val, ep_test, epochs) = match mode {
            Mode::Single => (60, 20, 20, 10),
            Mode::Generalize => (180, 10, 10, 5),
            Mode::Overfit => (10, 10, 10, 100),
            Mode::Finetune => (80, 20, 20, 10),
        };
        Self {
            mode,
            scenario: 0,
            ep_train,
            ep_val,
            ep_test,
            epochs,
        }
    }

    /// Laptop-size protocols.
    pub fn desk(mode: Mode) -> Self {
        let (ep_train, ep_val, ep_test, epochs) = match mode {
            Mode::Single => (6, 2, 2, 2),
            Mode::Generalize => (6, 2, 2, 2),
            Mode::Overfit => (3, 3, 3, 4),
            Mode::Finetune => (6, 2, 2, 2),
        };
        Self {
            mode,
            scenario: 0,
            ep_train,
            ep_val,
            ep_test,
            epochs,
        }
    }

    /// Environment steps a full run schedules.
    pub fn scheduled_steps(&self, steps_per_episode: usize) -> u64 {
        u64::from(self.ep_train) * steps_per_episode as u64 * self.epochs as u64
    }

    /// Number of scenarios the protocol needs.
    pub fn scenarios_needed(&self) -> usize {
        match self.mode {
            Mode::Single | Mode::Finetune => self.scenario + 1,
            Mode::Generalize => (self.ep_train + self.ep_val + self.ep_test) as usize,
            Mode::Overfit => self.ep_train as usize,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.into()));
        if self.ep_train == 0 {
            return bad("ep_train must be positive");
        }
        if self.epochs == 0 {
            return bad("epochs must be positive");
        }
        match self.mode {
            Mode::Overfit if self.ep_val != self.ep_train || self.ep_test != self.ep_train => {
                bad("overfit uses the training episodes for validation and testing")
            }
            Mode::Finetune if self.ep_val != self.ep_test => bad("finetune validates on its test episodes"),
            _ => Ok(()),
        }
    }

    /// Splits episodes according to the mode.
    pub fn splits(&self) -> Result<Splits, HarnessError> {
        self.validate()?;
        let one = |a: u32, b: u32| -> Vec<EpisodeRef> {
            (a..b)
                .map(|e| EpisodeRef {
                    scenario: self.scenario,
                    episode: e,
                })
                .collect()
        };
        let per_scenario = |a: u32, b: u32| -> Vec<EpisodeRef> {
            (a..b)
                .map(|s| EpisodeRef {
                    scenario: s as usize,
                    episode: 0,
                })
                .collect()
        };
        let (t, v, x) = (self.ep_train, self.ep_val, self.ep_test);
        Ok(match self.mode {
            Mode::Single => Splits {
                train: one(0, t),
                val: one(t, t + v),
                test: one(t + v, t + v + x),
            },
            Mode::Finetune => Splits {
                train: one(0, t),
                val: one(t, t + v),
                test: one(t, t + v),
            },
            Mode::Generalize => Splits {
                train: per_scenario(0, t),
                val: per_scenario(t, t + v),
                test: per_scenario(t + v, t + v + x),
            },
            Mode::Overfit => Splits {
                train: per_scenario(0, t),
                val: per_scenario(0, t),
                test: per_scenario(0, t),
            },
        })
    }
}
