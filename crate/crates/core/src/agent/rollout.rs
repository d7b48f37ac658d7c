//! Rollout storage.
//!
//! Transitions are kept as per-agent sequences so GAE never mixes agents:
//! the inter-slice agent has one sequence, each intra-slice agent its own,
//! and all intra sequences feed the shared intra policy.

use super::gae::gae;
use super::policy::Action;
use super::ppo::Sample;

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub obs: Vec<f64>,
    pub action: Action,
    pub mask: Vec<bool>,
    pub log_prob: f64,
    pub value: f64,
    pub reward: f64,
    /// Episode ended after this step.
    pub done: bool,
}

/// One agent's contiguous transitions plus the bootstrap value after them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sequence {
    pub steps: Vec<Transition>,
    pub last_value: f64,
}

#[derive(Debug, Clone, Default)]
pub struct RolloutBuffer {
    /// Finished sequences.
    closed: Vec<Sequence>,
    /// Open sequences keyed by agent slot.
    open: Vec<Option<Sequence>>,
    len: usize,
}

impl RolloutBuffer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Transitions stored, open and closed.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, agent: usize, t: Transition) {
        if self.open.len() <= agent {
            self.open.resize(agent + 1, None);
        }
        let done = t.done;
        self.open[agent].get_or_insert_with(Sequence::default).steps.push(t);
        self.len += 1;
        if done {
            let seq = self.open[agent].take().expect("just pushed");
            self.closed.push(seq);
        }
    }

    /// Closes an agent's open sequence with a bootstrap value.
    pub fn truncate(&mut self, agent: usize, last_value: f64) {
        if let Some(Some(mut seq)) = self.open.get_mut(agent).map(Option::take) {
            seq.last_value = last_value;
            self.closed.push(seq);
        }
    }

    /// Agents with an open sequence.
    pub fn open_agents(&self) -> Vec<usize> {
        (0..self.open.len()).filter(|&a| self.open[a].is_some()).collect()
    }

    /// Runs GAE over every closed sequence and empties the buffer.
    ///
    /// Panics if a sequence is still open.
    pub fn drain_samples(&mut self, gamma: f64, lambda: f64) -> Vec<Sample> {
        assert!(self.open.iter().all(Option::is_none), "open sequences remain");
        let mut out = Vec::with_capacity(self.len);
        for seq in self.closed.drain(..) {
            let r: Vec<f64> = seq.steps.iter().map(|t| t.reward).collect();
            let v: Vec<f64> = seq.steps.iter().map(|t| t.value).collect();
            let d: Vec<bool> = seq.steps.iter().map(|t| t.done).collect();
            let (adv, ret) = gae(&r, &v, &d, seq.last_value, gamma, lambda);
            for ((t, a), rt) in seq.steps.into_iter().zip(adv).zip(ret) {
                out.push(Sample {
                    obs: t.obs,
                    action: t.action,
                    mask: t.mask,
                    log_prob: t.log_prob,
                    advantage: a,
                    ret: rt,
                });
            }
        }
        self.open.clear();
        self.len = 0;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tr(r: f64, done: bool) -> Transition {
        Transition {
            obs: vec![],
            action: Action::Discrete(0),
            mask: vec![],
            log_prob: 0.0,
            value: 0.0,
            reward: r,
            done,
        }
    }

    #[test]
    fn sequences_are_kept_apart() {
        let mut b = RolloutBuffer::new();
        b.push(0, tr(1.0, false));
        b.push(1, tr(10.0, false));
        b.push(0, tr(1.0, true));
        b.push(1, tr(10.0, false));
        b.truncate(1, 0.0);
        assert_eq!(b.len(), 4);
        let s = b.drain_samples(1.0, 1.0);
        // Agent 0 closes first: returns 2, 1; agent 1: 20, 10.
        let rets: Vec<f64> = s.iter().map(|x| x.ret).collect();
        assert_eq!(rets, vec![2.0, 1.0, 20.0, 10.0]);
        assert!(b.is_empty());
    }
}
