//! Per-agent policy state: UCB arm selection over the active set, statistics,
//! most-played tracking and the end-of-phase active-set update.

use std::fmt;

use crate::arms::ArmSet;
use crate::confidence::{IndexFamily, IndexKind, KlBracket};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Non-sticky slots kept by the insert/eliminate baseline.
pub const DEFAULT_NON_STICKY_CAP: usize = 2;

/// How an agent rebuilds its active set at a phase boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpdateRule {
    /// Fast elimination: `sticky ∪ {recommendation, most played}`.
    Aogb,
    /// Gossip-insert-eliminate: insert the recommendation, then drop the
    /// least-played non-sticky arms until at most `cap` remain.
    GosInE { cap: usize },
}

impl UpdateRule {
    pub fn gosine() -> Self {
        UpdateRule::GosInE {
            cap: DEFAULT_NON_STICKY_CAP,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UpdateRule::Aogb => "AOGB",
            UpdateRule::GosInE { .. } => "GosInE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyKind<F> {
    pub rule: UpdateRule,
    pub index: IndexKind<F>,
}

impl<F: Scalar> PolicyKind<F> {
    pub fn new(rule: UpdateRule, index: IndexKind<F>) -> Self {
        Self { rule, index }
    }

    /// `AOGB-KL`, `GosInE-Hoeffding`, ...
    pub fn label(&self) -> String {
        format!("{}-{}", self.rule.name(), self.index.family().name())
    }
}

impl<F: Scalar> fmt::Display for PolicyKind<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(alpha={})", self.label(), self.index.alpha())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentState {
    id: usize,
    sticky: ArmSet,
    active: ArmSet,
    total_pulls: Vec<u64>,
    reward_sums: Vec<u64>,
    phase_pulls: Vec<u64>,
    phase_index: usize,
}

impl AgentState {
    /// Fresh agent in phase 1 with `active = sticky`.
    pub fn new(id: usize, sticky: ArmSet, num_arms: usize) -> Result<Self> {
        if sticky.is_empty() {
            return Err(Error::InvalidSetup(format!("agent {id} has an empty sticky set")));
        }
        if let Some(arm) = sticky.max_arm().filter(|&a| a >= num_arms) {
            return Err(Error::ArmOutOfRange { arm, arms: num_arms });
        }
        Ok(Self {
            id,
            active: sticky.clone(),
            sticky,
            total_pulls: vec![0; num_arms],
            reward_sums: vec![0; num_arms],
            phase_pulls: vec![0; num_arms],
            phase_index: 1,
        })
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn sticky_set(&self) -> &ArmSet {
        &self.sticky
    }

    pub fn active_set(&self) -> &ArmSet {
        &self.active
    }

    pub fn total_pulls(&self) -> &[u64] {
        &self.total_pulls
    }

    pub fn reward_sums(&self) -> &[u64] {
        &self.reward_sums
    }

    pub fn phase_pulls(&self) -> &[u64] {
        &self.phase_pulls
    }

    pub fn phase_index(&self) -> usize {
        self.phase_index
    }

    pub fn steps_elapsed(&self) -> u64 {
        self.total_pulls.iter().sum()
    }

    /// Empirical mean of `arm`, `None` if never played.
    pub fn mean_estimate<F: Scalar>(&self, arm: usize) -> Option<F> {
        match self.total_pulls[arm] {
            0 => None,
            n => Some(F::from_count(self.reward_sums[arm]) / F::from_count(n)),
        }
    }

    /// Current index of `arm` at step `t`.
    pub fn index<F: Scalar>(&self, arm: usize, t: u64, kind: &IndexKind<F>) -> F {
        let mu = self.mean_estimate(arm).unwrap_or_else(F::zero);
        kind.index_from_budget(mu, self.total_pulls[arm], kind.budget(t))
    }

    /// Arm of the active set with the largest index at step `t`, lowest id on
    /// ties.
    pub fn select_arm<F: Scalar>(&self, t: u64, kind: &IndexKind<F>) -> usize {
        self.select_arm_with_budget(kind.budget(t), kind)
    }

    /// [`select_arm`](Self::select_arm) with `ln f_alpha(t)` precomputed.
    pub fn select_arm_with_budget<F: Scalar>(&self, budget: F, kind: &IndexKind<F>) -> usize {
        if let Some(arm) = self.active.iter().find(|&a| self.total_pulls[a] == 0) {
            return arm;
        }
        match kind.family() {
            IndexFamily::Kl => self.select_kl(budget),
            IndexFamily::Hoeffding => {
                let mut arms = self.active.iter();
                let mut best_arm = arms.next().expect("active set is never empty");
                let mut best = self.index_with_budget(best_arm, budget, kind);
                for arm in arms {
                    let value = self.index_with_budget(arm, budget, kind);
                    if value > best {
                        best = value;
                        best_arm = arm;
                    }
                }
                best_arm
            }
        }
    }

    /// KL argmax over played arms. Each index is bisected only until it is
    /// clear whether it beats the running best.
    fn select_kl<F: Scalar>(&self, budget: F) -> usize {
        let bracket = |arm: usize| {
            let pulls = F::from_count(self.total_pulls[arm]);
            KlBracket::new(F::from_count(self.reward_sums[arm]) / pulls, budget / pulls)
        };
        let mut arms = self.active.iter();
        let mut best_arm = arms.next().expect("active set is never empty");
        let mut best = bracket(best_arm);
        for arm in arms {
            let mut challenger = bracket(arm);
            if challenger.exceeds(&mut best) {
                best = challenger;
                best_arm = arm;
            }
        }
        best_arm
    }

    fn index_with_budget<F: Scalar>(&self, arm: usize, budget: F, kind: &IndexKind<F>) -> F {
        let pulls = self.total_pulls[arm];
        if pulls == 0 {
            return F::infinity();
        }
        let mu = F::from_count(self.reward_sums[arm]) / F::from_count(pulls);
        kind.index_from_budget(mu, pulls, budget)
    }

    pub fn observe(&mut self, arm: usize, reward: u8) {
        self.total_pulls[arm] += 1;
        self.phase_pulls[arm] += 1;
        self.reward_sums[arm] += u64::from(reward);
    }

    /// Arm with the most pulls in the current phase, lowest id on ties.
    ///
    /// Only active arms can have phase pulls, so scanning the active set is
    /// the same as scanning every arm except for the all-zero tie.
    pub fn most_played_in_phase(&self) -> usize {
        let mut best = None;
        for arm in self.active.iter() {
            let n = self.phase_pulls[arm];
            match best {
                Some((_, m)) if m >= n => {}
                _ => best = Some((arm, n)),
            }
        }
        best.expect("active set is never empty").0
    }

    /// Closes the current phase given the received recommendation.
    ///
    /// Returns the phase's most played arm. Pull counts and reward sums of
    /// arms leaving the active set are kept.
    pub fn end_phase_update(&mut self, recommendation: usize, rule: UpdateRule) -> Result<usize> {
        let arms = self.total_pulls.len();
        if recommendation >= arms {
            return Err(Error::ArmOutOfRange {
                arm: recommendation,
                arms,
            });
        }
        let most_played = self.most_played_in_phase();
        match rule {
            UpdateRule::Aogb => {
                let mut next = self.sticky.clone();
                next.insert(recommendation);
                next.insert(most_played);
                self.active = next;
            }
            UpdateRule::GosInE { cap } => {
                self.active.insert(recommendation);
                while self.active.len() - self.sticky.len() > cap {
                    let victim = self.least_played_transient(recommendation);
                    self.active.remove(victim);
                }
            }
        }
        self.phase_pulls.iter_mut().for_each(|p| *p = 0);
        self.phase_index += 1;
        Ok(most_played)
    }

    /// Non-sticky arm with the fewest total pulls (lowest id on ties), sparing
    /// the just-inserted recommendation unless nothing else is left.
    fn least_played_transient(&self, keep: usize) -> usize {
        let transient = self.active.difference(&self.sticky);
        let pick = |skip_keep: bool| {
            transient
                .iter()
                .filter(|&a| !(skip_keep && a == keep))
                .min_by_key(|&a| (self.total_pulls[a], a))
        };
        pick(true).or_else(|| pick(false)).expect("a transient arm exists")
    }
}
