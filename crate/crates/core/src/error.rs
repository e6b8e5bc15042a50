use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("need at least two arms, got {0}")]
    TooFewArms(usize),
    #[error("need at least one agent")]
    NoAgents,
    #[error("{arms} arms cannot be partitioned among {agents} agents (need arms >= agents)")]
    FewerArmsThanAgents { arms: usize, agents: usize },
    #[error("mean {value} of arm {arm} is outside [0, 1]")]
    MeanOutOfRange { arm: usize, value: f64 },
    #[error("best arm is not unique: arms {0} and {1} share the top mean")]
    TiedBestArm(usize, usize),
    #[error("invalid mean grid: {0}")]
    InvalidGrid(String),
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("time step must be at least 1")]
    ZeroTimeStep,
    #[error("exploration exponent alpha must be positive, got {0}")]
    InvalidAlpha(f64),
    #[error("arm {arm} is out of range for {arms} arms")]
    ArmOutOfRange { arm: usize, arms: usize },
    #[error("agent {agent} is out of range for {agents} agents")]
    AgentOutOfRange { agent: usize, agents: usize },
    #[error("{topology} graph needs at least {min} agents, got {got}")]
    TooFewAgents {
        topology: &'static str,
        min: usize,
        got: usize,
    },
    #[error("invalid gossip matrix: {0}")]
    InvalidMatrix(String),
    #[error("gossip graph is not strongly connected")]
    NotStronglyConnected,
    #[error("phase growth exponent theta must be positive, got {0}")]
    InvalidTheta(f64),
    #[error("invalid simulation setup: {0}")]
    InvalidSetup(String),
}

pub type Result<T> = std::result::Result<T, Error>;
