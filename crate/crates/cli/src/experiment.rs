//! Sweep planning and parallel Monte Carlo orchestration.

use anyhow::{Context, Result};
use gossip_bandits::{sample_grid, stabilization_is_absorbing, Instance, Policy, RewardStream, Simulation};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::summary::{summarize, SummaryRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// Every configured algorithm on the configured instance and topology.
    Single,
    Alpha,
    DeltaMin,
    Topology,
}

/// One curve family: an algorithm at one sweep point.
#[derive(Debug, Clone)]
pub struct SeriesPlan {
    /// Algorithm label, suffixed with `@topology` in topology sweeps.
    pub label: String,
    pub alpha: f64,
    pub sweep_value: f64,
    pub topology: String,
    pub instance: Instance,
    pub policy: Policy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub run: u64,
    pub node_avg: Vec<f64>,
    pub final_regret: Vec<f64>,
    pub realized_regret: Vec<f64>,
    pub stabilization_phase: Option<usize>,
    /// Whether the stabilized configuration persisted to the horizon.
    pub absorbing: bool,
    pub first_spread_phase: Vec<Option<usize>>,
}

#[derive(Debug, Clone)]
pub struct SeriesResult {
    pub plan: SeriesPlan,
    pub grid: Vec<u64>,
    pub runs: Vec<RunOutcome>,
}

impl SeriesResult {
    pub fn summary(&self) -> Vec<SummaryRecord> {
        let curves: Vec<Vec<f64>> = self.runs.iter().map(|r| r.node_avg.clone()).collect();
        summarize(&self.plan.label, self.plan.alpha, self.plan.sweep_value, &self.grid, &curves)
    }

    /// Node-averaged regret at the horizon, averaged over runs.
    pub fn mean_final_regret(&self) -> f64 {
        let total: f64 = self.runs.iter().map(|r| *r.node_avg.last().unwrap()).sum();
        total / self.runs.len() as f64
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub series: Vec<SeriesResult>,
}

impl ExperimentOutput {
    pub fn summary(&self) -> Vec<SummaryRecord> {
        self.series.iter().flat_map(SeriesResult::summary).collect()
    }

    pub fn find(&self, label: &str, sweep_value: f64) -> Option<&SeriesResult> {
        self.series
            .iter()
            .find(|s| s.plan.label == label && s.plan.sweep_value == sweep_value)
    }
}

pub fn plan(config: &ExperimentConfig, sweep: Sweep) -> Result<Vec<SeriesPlan>> {
    let mut plans = Vec::new();
    let mut push = |label: String, alpha: f64, sweep_value: f64, topology: &str, instance: &Instance, policy: Policy| {
        plans.push(SeriesPlan {
            label,
            alpha,
            sweep_value,
            topology: topology.to_string(),
            instance: instance.clone(),
            policy,
        })
    };
    match sweep {
        Sweep::Single => {
            let instance = config.instance()?;
            for policy in config.policies(config.alpha)? {
                push(policy.label(), config.alpha, instance.delta_min(), &config.topology, &instance, policy);
            }
        }
        Sweep::Alpha => {
            let instance = config.instance()?;
            for &alpha in &config.alpha_values {
                for policy in config.policies(alpha)? {
                    push(policy.label(), alpha, alpha, &config.topology, &instance, policy);
                }
            }
        }
        Sweep::DeltaMin => {
            for &delta in &config.delta_min_values {
                let instance = config
                    .delta_instance(delta)
                    .with_context(|| format!("delta_min = {delta}"))?;
                for policy in config.policies(config.alpha)? {
                    push(policy.label(), config.alpha, delta, &config.topology, &instance, policy);
                }
            }
        }
        Sweep::Topology => {
            let instance = config.instance()?;
            for (i, topology) in config.topology_values.iter().enumerate() {
                for policy in config.policies(config.alpha)? {
                    let label = format!("{}@{}", policy.label(), topology);
                    push(label, config.alpha, i as f64, topology, &instance, policy);
                }
            }
        }
    }
    Ok(plans)
}

/// Runs every series for run ids `0..runs` on `workers` threads.
///
/// All series share the master seed, so run `r` of every algorithm reads the
/// same reward bits. Results are assembled in (series, run id) order and do
/// not depend on the worker count.
pub fn run_experiment(config: &ExperimentConfig, sweep: Sweep, workers: usize) -> Result<ExperimentOutput> {
    let plans = plan(config, sweep)?;
    let grid = sample_grid(config.horizon, config.grid_stride);
    let schedule = config.schedule();
    let mut prepared = Vec::with_capacity(plans.len());
    for p in &plans {
        let matrix = config
            .matrix(&p.topology)
            .with_context(|| format!("topology `{}`", p.topology))?;
        let stream = RewardStream::new(config.seed, p.instance.means());
        prepared.push((matrix, stream));
    }
    let sims = plans
        .iter()
        .zip(&prepared)
        .map(|(p, (matrix, stream))| {
            Simulation::new(&p.instance, matrix, p.policy, schedule, stream, config.horizon, grid.clone())
        })
        .collect::<gossip_bandits::Result<Vec<_>>>()?;

    let jobs: Vec<(usize, u64)> = (0..sims.len())
        .flat_map(|s| (0..config.runs).map(move |r| (s, r)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .context("building worker pool")?;
    let outcomes: Vec<RunOutcome> = pool.install(|| {
        jobs.par_iter()
            .map(|&(s, run)| {
                let sim = &sims[s];
                let trace = sim.run(run);
                let absorbing = stabilization_is_absorbing(&trace, sim.sticky_sets(), sim.instance().best_arm());
                RunOutcome {
                    run,
                    node_avg: trace.node_averaged(),
                    final_regret: (0..trace.num_agents()).map(|n| trace.final_regret(n)).collect(),
                    realized_regret: trace.realized_regret_final.clone(),
                    stabilization_phase: trace.stabilization_phase,
                    absorbing,
                    first_spread_phase: trace.first_spread_phase.clone(),
                }
            })
            .collect()
    });

    let mut outcomes = outcomes.into_iter();
    let series = plans
        .into_iter()
        .map(|plan| SeriesResult {
            plan,
            grid: grid.clone(),
            runs: outcomes.by_ref().take(config.runs as usize).collect(),
        })
        .collect();
    Ok(ExperimentOutput { series })
}
