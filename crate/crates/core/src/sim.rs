//! Synchronous round engine.
//!
//! Every step each agent plays one arm of its active set and observes the
//! shared reward stream. At a phase boundary all agents first fix their most
//! played arm, then each samples a sender and receives that sender's arm,
//! then all apply their update rule, so every recommendation refers to the
//! finished phase only. The new active sets govern play from the next step.

use crate::agent::{AgentState, PolicyKind};
use crate::arms::ArmSet;
use crate::error::{Error, Result};
use crate::model::{partition_sticky_sets, ProblemInstance};
use crate::network::GossipMatrix;
use crate::scalar::Scalar;
use crate::schedule::PhaseSchedule;
use crate::stream::{gossip_rng, RewardStream};

/// What one agent did at one phase boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exchange {
    pub most_played: usize,
    pub sender: usize,
    pub recommendation: usize,
}

/// Outcome of one Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace<F> {
    pub run: u64,
    /// Sample times, increasing, ending at the horizon.
    pub grid: Vec<u64>,
    /// `regret_grid[n][g]`: cumulative pseudo-regret of agent `n` at `grid[g]`.
    pub regret_grid: Vec<Vec<F>>,
    /// `T * mu_star - sum of collected rewards`, per agent.
    pub realized_regret_final: Vec<F>,
    /// `active_set_log[j - 1][n]`: active set of agent `n` during phase `j`,
    /// for every phase that has at least one step within the horizon.
    pub active_set_log: Vec<Vec<ArmSet>>,
    /// `exchange_log[j - 1][n]`: the exchange closing phase `j`, for every
    /// boundary reached within the horizon.
    pub exchange_log: Vec<Vec<Exchange>>,
    pub stabilization_phase: Option<usize>,
    pub first_spread_phase: Vec<Option<usize>>,
}

impl<F: Scalar> RunTrace<F> {
    pub fn num_agents(&self) -> usize {
        self.regret_grid.len()
    }

    /// Pseudo-regret of agent `n` at the horizon.
    pub fn final_regret(&self, n: usize) -> F {
        self.regret_grid[n].last().copied().unwrap_or_else(F::zero)
    }

    /// Regret averaged over agents at each grid point.
    pub fn node_averaged(&self) -> Vec<F> {
        let agents = F::from_count(self.num_agents() as u64);
        (0..self.grid.len())
            .map(|g| {
                self.regret_grid
                    .iter()
                    .fold(F::zero(), |acc, curve| acc + curve[g])
                    / agents
            })
            .collect()
    }
}

/// `stride, 2 stride, ...` up to the horizon, always ending at the horizon.
/// A zero stride picks `ceil(horizon / 1000)`.
pub fn sample_grid(horizon: u64, stride: u64) -> Vec<u64> {
    let stride = if stride == 0 {
        horizon.div_ceil(1000).max(1)
    } else {
        stride
    };
    let mut grid: Vec<u64> = (1..)
        .map(|i| i * stride)
        .take_while(|&t| t < horizon)
        .collect();
    grid.push(horizon);
    grid
}

/// Smallest `j0` such that in every logged phase `j > j0` every agent's
/// active set is its sticky set plus the best arm; `None` if the last logged
/// phase is not of that form.
pub fn detect_stabilization(
    active_set_log: &[Vec<ArmSet>],
    sticky_sets: &[ArmSet],
    best_arm: usize,
) -> Option<usize> {
    let targets: Vec<ArmSet> = sticky_sets.iter().map(|s| s.with(best_arm)).collect();
    let settled = |sets: &Vec<ArmSet>| sets.iter().zip(&targets).all(|(s, t)| s == t);
    let trailing = active_set_log.iter().rev().take_while(|sets| settled(sets)).count();
    if trailing == 0 {
        None
    } else {
        Some(active_set_log.len() - trailing)
    }
}

/// Per agent, the first phase whose active set holds the best arm; 0 for an
/// agent that starts with it.
pub fn detect_first_spread(active_set_log: &[Vec<ArmSet>], best_arm: usize) -> Vec<Option<usize>> {
    let Some(first) = active_set_log.first() else {
        return Vec::new();
    };
    (0..first.len())
        .map(|n| {
            if first[n].contains(best_arm) {
                return Some(0);
            }
            active_set_log
                .iter()
                .position(|sets| sets[n].contains(best_arm))
                .map(|i| i + 1)
        })
        .collect()
}

/// Checks that a run's stabilization is absorbing: after the detected phase
/// every logged active set is `sticky ∪ {best}` and every exchange in between
/// maps that set onto itself under fast elimination. Vacuously true if the
/// run never stabilized.
pub fn stabilization_is_absorbing<F: Scalar>(
    trace: &RunTrace<F>,
    sticky_sets: &[ArmSet],
    best_arm: usize,
) -> bool {
    let Some(j0) = trace.stabilization_phase else {
        return true;
    };
    let targets: Vec<ArmSet> = sticky_sets.iter().map(|s| s.with(best_arm)).collect();
    let phases = trace.active_set_log.len();
    for j in (j0 + 1)..=phases {
        let sets = &trace.active_set_log[j - 1];
        if sets.iter().zip(&targets).any(|(s, t)| s != t) {
            return false;
        }
        if j < phases {
            let exchanges = &trace.exchange_log[j - 1];
            for (n, ex) in exchanges.iter().enumerate() {
                let mut next = sticky_sets[n].clone();
                next.insert(ex.most_played);
                next.insert(ex.recommendation);
                if next != targets[n] {
                    return false;
                }
            }
        }
    }
    true
}

/// A fully validated simulation setup; [`run`](Self::run) cannot fail.
#[derive(Debug, Clone)]
pub struct Simulation<'a, F> {
    instance: &'a ProblemInstance<F>,
    matrix: &'a GossipMatrix<F>,
    policy: PolicyKind<F>,
    schedule: PhaseSchedule,
    stream: &'a RewardStream,
    horizon: u64,
    grid: Vec<u64>,
    sticky_sets: Vec<ArmSet>,
}

impl<'a, F: Scalar> Simulation<'a, F> {
    pub fn new(
        instance: &'a ProblemInstance<F>,
        matrix: &'a GossipMatrix<F>,
        policy: PolicyKind<F>,
        schedule: PhaseSchedule,
        stream: &'a RewardStream,
        horizon: u64,
        grid: Vec<u64>,
    ) -> Result<Self> {
        let agents = instance.num_agents();
        if matrix.size() != agents {
            return Err(Error::InvalidSetup(format!(
                "gossip matrix is {0}x{0} but there are {agents} agents",
                matrix.size()
            )));
        }
        if !matrix.is_strongly_connected() {
            return Err(Error::NotStronglyConnected);
        }
        if horizon == 0 {
            return Err(Error::InvalidSetup("horizon must be at least 1".into()));
        }
        if stream.num_arms() != instance.num_arms() {
            return Err(Error::InvalidSetup(format!(
                "reward stream has {} arms, instance has {}",
                stream.num_arms(),
                instance.num_arms()
            )));
        }
        if grid.is_empty()
            || grid[0] == 0
            || *grid.last().unwrap() > horizon
            || grid.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidSetup(
                "sample grid must be nonempty, strictly increasing and within [1, horizon]".into(),
            ));
        }
        let sticky_sets = partition_sticky_sets(instance.num_arms(), agents)?;
        Ok(Self {
            instance,
            matrix,
            policy,
            schedule,
            stream,
            horizon,
            grid,
            sticky_sets,
        })
    }

    pub fn sticky_sets(&self) -> &[ArmSet] {
        &self.sticky_sets
    }

    pub fn instance(&self) -> &ProblemInstance<F> {
        self.instance
    }

    pub fn run(&self, run: u64) -> RunTrace<F> {
        self.run_observed(run, |_, _| {})
    }

    /// [`run`](Self::run), calling `observe(t, agents)` after every step
    /// (after the boundary update when `t` closes a phase).
    pub fn run_observed<O>(&self, run: u64, mut observe: O) -> RunTrace<F>
    where
        O: FnMut(u64, &[AgentState]),
    {
        let num_arms = self.instance.num_arms();
        let num_agents = self.instance.num_agents();
        let gaps = self.instance.gaps();
        let best = self.instance.best_arm();
        let index = self.policy.index;

        let mut agents: Vec<AgentState> = self
            .sticky_sets
            .iter()
            .enumerate()
            .map(|(n, s)| AgentState::new(n, s.clone(), num_arms).expect("partition is valid"))
            .collect();
        let mut rng = gossip_rng(self.stream.master_seed(), run);

        let mut pseudo = vec![F::zero(); num_agents];
        let mut collected = vec![0u64; num_agents];
        let mut regret_grid = vec![Vec::with_capacity(self.grid.len()); num_agents];
        let mut next_sample = 0;

        let mut phase = 1u64;
        let mut next_boundary = self.schedule.boundary(phase);
        let mut active_set_log = vec![self.sticky_sets.clone()];
        let mut exchange_log = Vec::new();

        for t in 1..=self.horizon {
            let budget = index.budget(t);
            for (n, agent) in agents.iter_mut().enumerate() {
                let arm = agent.select_arm_with_budget(budget, &index);
                let pull = agent.total_pulls()[arm] + 1;
                let reward = self.stream.reward(run, n, arm, pull);
                agent.observe(arm, reward);
                pseudo[n] = pseudo[n] + gaps[arm];
                collected[n] += u64::from(reward);
            }
            if self.grid.get(next_sample) == Some(&t) {
                for (curve, &r) in regret_grid.iter_mut().zip(&pseudo) {
                    curve.push(r);
                }
                next_sample += 1;
            }
            if t == next_boundary {
                let most_played: Vec<usize> =
                    agents.iter().map(AgentState::most_played_in_phase).collect();
                let senders: Vec<usize> = (0..num_agents)
                    .map(|n| self.matrix.sample_neighbor(n, &mut rng))
                    .collect();
                let mut exchanges = Vec::with_capacity(num_agents);
                for (n, agent) in agents.iter_mut().enumerate() {
                    let recommendation = most_played[senders[n]];
                    let m = agent
                        .end_phase_update(recommendation, self.policy.rule)
                        .expect("recommendations are valid arms");
                    exchanges.push(Exchange {
                        most_played: m,
                        sender: senders[n],
                        recommendation,
                    });
                }
                exchange_log.push(exchanges);
                phase += 1;
                next_boundary = self.schedule.boundary(phase);
                if t < self.horizon {
                    active_set_log.push(agents.iter().map(|a| a.active_set().clone()).collect());
                }
            }
            observe(t, &agents);
        }

        let optimal = self.instance.best_mean() * F::from_count(self.horizon);
        let realized_regret_final = collected
            .iter()
            .map(|&c| optimal - F::from_count(c))
            .collect();
        let stabilization_phase = detect_stabilization(&active_set_log, &self.sticky_sets, best);
        let first_spread_phase = detect_first_spread(&active_set_log, best);
        RunTrace {
            run,
            grid: self.grid.clone(),
            regret_grid,
            realized_regret_final,
            active_set_log,
            exchange_log,
            stabilization_phase,
            first_spread_phase,
        }
    }
}
