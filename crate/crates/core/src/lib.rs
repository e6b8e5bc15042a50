//! Decentralized multi-agent Bernoulli bandits where agents may only swap a
//! single arm recommendation per phase with a gossip partner.
//!
//! The math is generic over [`Scalar`] (`f32` or `f64`); the aliases below fix
//! `f64`, which the experiment harness uses throughout.

pub mod agent;
pub mod arms;
pub mod confidence;
pub mod error;
pub mod model;
pub mod network;
pub mod scalar;
pub mod schedule;
pub mod sim;
pub mod stream;

pub use agent::{AgentState, PolicyKind, UpdateRule, DEFAULT_NON_STICKY_CAP};
pub use arms::ArmSet;
pub use confidence::{
    exploration_budget, f_alpha, hoeffding_index, kl_bernoulli, kl_ucb_from_budget, kl_ucb_index,
    IndexFamily, IndexKind,
};
pub use error::{Error, Result};
pub use model::{partition_sticky_sets, uniform_grid_means, ProblemInstance};
pub use network::GossipMatrix;
pub use scalar::Scalar;
pub use schedule::PhaseSchedule;
pub use sim::{
    detect_first_spread, detect_stabilization, sample_grid, stabilization_is_absorbing, Exchange,
    RunTrace, Simulation,
};
pub use stream::RewardStream;

pub type Instance = ProblemInstance<f64>;
pub type Instance32 = ProblemInstance<f32>;
pub type Gossip = GossipMatrix<f64>;
pub type Gossip32 = GossipMatrix<f32>;
pub type Index = IndexKind<f64>;
pub type Policy = PolicyKind<f64>;
pub type Policy32 = PolicyKind<f32>;
pub type Trace = RunTrace<f64>;
pub type Trace32 = RunTrace<f32>;
