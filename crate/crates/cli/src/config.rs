//! Experiment configuration: a flat TOML document, strictly parsed.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use gossip_bandits::{
    uniform_grid_means, Gossip, IndexFamily, IndexKind, Instance, PhaseSchedule, Policy,
    UpdateRule,
};
use serde::Deserialize;

pub const DEFAULT_ALGORITHMS: [&str; 4] = ["AOGB-KL", "GosInE-KL", "AOGB-Hoeffding", "GosInE-Hoeffding"];

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub agents: usize,
    pub arms: usize,
    #[serde(default = "defaults::mu_star")]
    pub mu_star: f64,
    /// Explicit arm means; replaces the uniform grid when present.
    #[serde(default)]
    pub means: Option<Vec<f64>>,
    #[serde(default = "defaults::grid_lo")]
    pub grid_lo: f64,
    #[serde(default = "defaults::grid_hi")]
    pub grid_hi: f64,
    #[serde(default = "defaults::algorithms")]
    pub algorithms: Vec<String>,
    #[serde(default = "defaults::alpha")]
    pub alpha: f64,
    #[serde(default = "defaults::alpha_values")]
    pub alpha_values: Vec<f64>,
    #[serde(default = "defaults::delta_min_values")]
    pub delta_min_values: Vec<f64>,
    /// `complete`, `cycle`, `star`, or a path to a dense CSV matrix.
    #[serde(default = "defaults::topology")]
    pub topology: String,
    #[serde(default = "defaults::topology_values")]
    pub topology_values: Vec<String>,
    /// Hub of the star topology; defaults to the last agent.
    #[serde(default)]
    pub star_center: Option<usize>,
    #[serde(default = "defaults::theta")]
    pub theta: f64,
    #[serde(default = "defaults::horizon")]
    pub horizon: u64,
    #[serde(default = "defaults::runs")]
    pub runs: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "defaults::out")]
    pub out: PathBuf,
    /// Regret sampling stride; 0 picks `ceil(horizon / 1000)`.
    #[serde(default)]
    pub grid_stride: u64,
    #[serde(default = "defaults::gosine_cap")]
    pub gosine_cap: usize,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

mod defaults {
    use std::path::PathBuf;

    pub fn mu_star() -> f64 {
        0.9
    }
    pub fn grid_lo() -> f64 {
        0.2
    }
    pub fn grid_hi() -> f64 {
        0.8
    }
    pub fn algorithms() -> Vec<String> {
        super::DEFAULT_ALGORITHMS.iter().map(|s| s.to_string()).collect()
    }
    pub fn alpha() -> f64 {
        1.0
    }
    pub fn alpha_values() -> Vec<f64> {
        vec![0.5, 1.0, 2.0]
    }
    pub fn delta_min_values() -> Vec<f64> {
        vec![0.05, 0.1, 0.2]
    }
    pub fn topology() -> String {
        "complete".into()
    }
    pub fn topology_values() -> Vec<String> {
        ["complete", "cycle", "star"].iter().map(|s| s.to_string()).collect()
    }
    pub fn theta() -> f64 {
        2.0
    }
    pub fn horizon() -> u64 {
        100_000
    }
    pub fn runs() -> u64 {
        100
    }
    pub fn out() -> PathBuf {
        PathBuf::from("results")
    }
    pub fn gosine_cap() -> usize {
        gossip_bandits::DEFAULT_NON_STICKY_CAP
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut config = Self::parse(&text).with_context(|| format!("in config {}", path.display()))?;
        config.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(config)
    }

    /// Parses and validates; relative matrix paths resolve against the
    /// working directory.
    pub fn parse(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.agents >= 1, "field `agents`: need at least one agent");
        ensure!(self.arms >= 2, "field `arms`: need at least two arms");
        ensure!(
            self.arms >= self.agents,
            "fields `arms`/`agents`: {} arms cannot be shared among {} agents",
            self.arms,
            self.agents
        );
        ensure!(self.runs >= 1, "field `runs`: need at least one run");
        ensure!(self.horizon >= 1, "field `horizon`: must be at least 1");
        ensure!(!self.algorithms.is_empty(), "field `algorithms`: list is empty");
        for name in &self.algorithms {
            parse_algorithm(name, 1.0, self.gosine_cap).context("field `algorithms`")?;
        }
        ensure!(self.gosine_cap >= 1, "field `gosine_cap`: must be at least 1");
        for (field, alpha) in std::iter::once(("alpha", &self.alpha))
            .chain(self.alpha_values.iter().map(|a| ("alpha_values", a)))
        {
            ensure!(*alpha > 0.0 && alpha.is_finite(), "field `{field}`: alpha must be positive, got {alpha}");
        }
        PhaseSchedule::new(self.theta).context("field `theta`")?;
        if let Some(means) = &self.means {
            ensure!(
                means.len() == self.arms,
                "field `means`: {} values given but `arms` = {}",
                means.len(),
                self.arms
            );
        }
        self.instance().context("arm means")?;
        for &delta in &self.delta_min_values {
            ensure!(
                delta > 0.0 && self.mu_star - delta > 0.2,
                "field `delta_min_values`: {delta} leaves no room above the grid floor 0.2"
            );
        }
        if let Some(center) = self.star_center {
            ensure!(center < self.agents, "field `star_center`: agent {center} does not exist");
        }
        Ok(())
    }

    pub fn schedule(&self) -> PhaseSchedule {
        PhaseSchedule::new(self.theta).expect("validated")
    }

    /// Means from `means` if given, else `mu_star` over the `[grid_lo, grid_hi]` grid.
    pub fn base_means(&self) -> Result<Vec<f64>> {
        match &self.means {
            Some(m) => Ok(m.clone()),
            None => Ok(uniform_grid_means(self.mu_star, self.grid_lo, self.grid_hi, self.arms)?),
        }
    }

    pub fn instance(&self) -> Result<Instance> {
        Ok(Instance::new(self.base_means()?, self.agents)?)
    }

    /// Instance whose suboptimal means divide `[mu_star - delta_min, 0.2]`.
    pub fn delta_instance(&self, delta_min: f64) -> Result<Instance> {
        let means = uniform_grid_means(self.mu_star, self.mu_star - delta_min, 0.2, self.arms)?;
        Ok(Instance::new(means, self.agents)?)
    }

    pub fn policies(&self, alpha: f64) -> Result<Vec<Policy>> {
        self.algorithms
            .iter()
            .map(|name| parse_algorithm(name, alpha, self.gosine_cap))
            .collect()
    }

    pub fn star_center(&self) -> usize {
        self.star_center.unwrap_or(self.agents.saturating_sub(1))
    }

    /// Gossip matrix for a topology name or CSV path.
    pub fn matrix(&self, topology: &str) -> Result<Gossip> {
        if self.agents == 1 {
            return Ok(Gossip::single_agent());
        }
        let matrix = match topology {
            "complete" => Gossip::complete(self.agents)?,
            "cycle" => Gossip::cycle(self.agents)?,
            "star" => Gossip::star(self.agents, self.star_center())?,
            path => {
                let path = self.base_dir.join(path);
                let m = load_matrix(&path)?;
                ensure!(
                    m.size() == self.agents,
                    "matrix {} is {}x{} but `agents` = {}",
                    path.display(),
                    m.size(),
                    m.size(),
                    self.agents
                );
                m
            }
        };
        ensure!(
            matrix.is_strongly_connected(),
            "topology `{topology}` is not strongly connected"
        );
        Ok(matrix)
    }
}

/// Accepts `RULE-INDEX` (`AOGB-KL`, `GosInE-Hoeffding`, ...) and the short
/// names `AOGB`, `GIE-FE`, `KLUCB-GIE`, `UCB-GIE`, case-insensitively.
pub fn parse_algorithm(name: &str, alpha: f64, cap: usize) -> Result<Policy> {
    let (rule, family) = match name.to_ascii_lowercase().as_str() {
        "aogb-kl" | "aogb" => (UpdateRule::Aogb, IndexFamily::Kl),
        "aogb-hoeffding" | "gie-fe" => (UpdateRule::Aogb, IndexFamily::Hoeffding),
        "gosine-kl" | "klucb-gie" => (UpdateRule::GosInE { cap }, IndexFamily::Kl),
        "gosine-hoeffding" | "ucb-gie" => (UpdateRule::GosInE { cap }, IndexFamily::Hoeffding),
        _ => bail!("unknown algorithm `{name}`"),
    };
    Ok(Policy::new(rule, IndexKind::new(family, alpha)?))
}

/// Dense matrix, one row per line, comma separated, no header.
pub fn load_matrix(path: &Path) -> Result<Gossip> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("opening matrix {}", path.display()))?;
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("{}: line {}", path.display(), line + 1))?;
        let row = record
            .iter()
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .with_context(|| format!("{}: line {}: not a number", path.display(), line + 1))?;
        rows.push(row);
    }
    Gossip::from_rows(rows).with_context(|| format!("matrix {}", path.display()))
}
