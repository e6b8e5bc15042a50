//! Experiment harness: configuration, sweeps, Monte Carlo orchestration and
//! CSV output for gossip-constrained multi-agent bandits.

pub mod config;
pub mod experiment;
pub mod output;
pub mod summary;

pub use config::{parse_algorithm, ExperimentConfig};
pub use experiment::{run_experiment, ExperimentOutput, RunOutcome, SeriesPlan, SeriesResult, Sweep};
pub use summary::{mean_and_half_width, summarize, SummaryRecord};
