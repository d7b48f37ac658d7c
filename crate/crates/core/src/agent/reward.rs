//! Inter- and intra-slice rewards.

use crate::intent::{cv, Drifts};

/// Intra-slice reward: the worst active drift of the slice.
pub fn intra_reward(d: &Drifts) -> f64 {
    d.min_active()
}

/// Which branch of [`inter_reward`] applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewardCase {
    AllFulfilled,
    HighPriorityUnfulfilled,
    Unfulfilled,
}

/// Inter-slice reward over the active slices `(high_priority, drifts)`.
///
/// All fulfilled: mean intra reward, in `[0, 1]`. Some high-priority slice
/// unfulfilled: mean intra reward of those slices minus 1, in `[-2, -1]`.
/// Otherwise: mean intra reward of the unfulfilled slices, in `[-1, 0]`.
pub fn inter_reward(slices: &[(bool, Drifts)]) -> (f64, RewardCase) {
    if slices.is_empty() {
        return (0.0, RewardCase::AllFulfilled);
    }
    let mean = |it: &mut dyn Iterator<Item = f64>| {
        let (s, n) = it.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
        s / n as f64
    };
    let cv_act = cv(slices.iter().map(|(_, d)| d));
    let cv_hp = cv(slices.iter().filter(|(hp, _)| *hp).map(|(_, d)| d));
    if cv_act == 0.0 {
        let r = mean(&mut slices.iter().map(|(_, d)| intra_reward(d)));
        (r, RewardCase::AllFulfilled)
    } else if cv_hp < 0.0 {
        let r = mean(
            &mut slices
                .iter()
                .filter(|(hp, d)| *hp && d.min_active() < 0.0)
                .map(|(_, d)| intra_reward(d)),
        );
        (r - 1.0, RewardCase::HighPriorityUnfulfilled)
    } else {
        let r = mean(
            &mut slices
                .iter()
                .filter(|(_, d)| d.min_active() < 0.0)
                .map(|(_, d)| intra_reward(d)),
        );
        (r, RewardCase::Unfulfilled)
    }
}
