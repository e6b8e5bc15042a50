//! Bandit problem instances and the asymptotic regret constants they induce.

use crate::arms::ArmSet;
use crate::confidence::kl_unchecked;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Bernoulli arm means shared by `num_agents` agents, with a unique best arm.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance<F> {
    num_agents: usize,
    means: Vec<F>,
    best_arm: usize,
    gaps: Vec<F>,
    delta_min: F,
}

impl<F: Scalar> ProblemInstance<F> {
    pub fn new(means: Vec<F>, num_agents: usize) -> Result<Self> {
        let k = means.len();
        if k < 2 {
            return Err(Error::TooFewArms(k));
        }
        if num_agents == 0 {
            return Err(Error::NoAgents);
        }
        if k < num_agents {
            return Err(Error::FewerArmsThanAgents {
                arms: k,
                agents: num_agents,
            });
        }
        for (arm, &m) in means.iter().enumerate() {
            if !(m >= F::zero() && m <= F::one()) {
                return Err(Error::MeanOutOfRange {
                    arm,
                    value: m.as_f64(),
                });
            }
        }
        let mut best_arm = 0;
        for arm in 1..k {
            if means[arm] > means[best_arm] {
                best_arm = arm;
            }
        }
        let mu_star = means[best_arm];
        if let Some(tie) = (0..k).find(|&a| a != best_arm && means[a] == mu_star) {
            return Err(Error::TiedBestArm(best_arm.min(tie), best_arm.max(tie)));
        }
        let gaps: Vec<F> = means.iter().map(|&m| mu_star - m).collect();
        let delta_min = gaps
            .iter()
            .enumerate()
            .filter(|&(a, _)| a != best_arm)
            .map(|(_, &g)| g)
            .fold(F::infinity(), F::min);
        Ok(Self {
            num_agents,
            means,
            best_arm,
            gaps,
            delta_min,
        })
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    pub fn num_arms(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[F] {
        &self.means
    }

    pub fn best_arm(&self) -> usize {
        self.best_arm
    }

    pub fn best_mean(&self) -> F {
        self.means[self.best_arm]
    }

    pub fn gaps(&self) -> &[F] {
        &self.gaps
    }

    pub fn delta_min(&self) -> F {
        self.delta_min
    }

    /// `gap_k / KL(mu_k, mu_star)`, or zero when the divergence is infinite.
    fn arm_constant(&self, arm: usize) -> F {
        if arm == self.best_arm {
            return F::zero();
        }
        let kl = kl_unchecked(self.means[arm], self.best_mean());
        if kl.is_infinite() {
            F::zero()
        } else {
            self.gaps[arm] / kl
        }
    }

    /// Lai–Robbins constant: `sum over k != best of gap_k / KL(mu_k, mu_star)`.
    ///
    /// Lower bound on total regret per `ln T` for any consistent centralized
    /// policy.
    pub fn lai_robbins_constant(&self) -> F {
        (0..self.num_arms())
            .map(|a| self.arm_constant(a))
            .fold(F::zero(), |acc, c| acc + c)
    }

    /// The same sum restricted to one agent's sticky set; the limiting regret
    /// per `ln T` of that agent under fast elimination with `alpha = 1`.
    pub fn agent_asymptotic_constant(&self, sticky: &ArmSet) -> Result<F> {
        if let Some(arm) = sticky.max_arm().filter(|&a| a >= self.num_arms()) {
            return Err(Error::ArmOutOfRange {
                arm,
                arms: self.num_arms(),
            });
        }
        Ok(sticky
            .iter()
            .map(|a| self.arm_constant(a))
            .fold(F::zero(), |acc, c| acc + c))
    }
}

/// `[mu_star]` followed by `num_arms - 1` evenly spaced means covering the
/// interval between `lo` and `hi`, both endpoints included, in descending order.
///
/// The endpoints may be given in either order. With a single suboptimal arm
/// its mean is the upper endpoint.
pub fn uniform_grid_means<F: Scalar>(mu_star: F, lo: F, hi: F, num_arms: usize) -> Result<Vec<F>> {
    if num_arms < 2 {
        return Err(Error::TooFewArms(num_arms));
    }
    let (low, high) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    for p in [mu_star, low, high] {
        if !(p >= F::zero() && p <= F::one()) {
            return Err(Error::InvalidGrid(format!("{p} is outside [0, 1]")));
        }
    }
    if high >= mu_star {
        return Err(Error::InvalidGrid(format!(
            "upper endpoint {high} must be below the best mean {mu_star}"
        )));
    }
    let rest = num_arms - 1;
    if rest > 1 && low == high {
        return Err(Error::InvalidGrid("interval endpoints coincide".into()));
    }
    let mut means = Vec::with_capacity(num_arms);
    means.push(mu_star);
    if rest == 1 {
        means.push(high);
        return Ok(means);
    }
    let steps = F::from_count(rest as u64 - 1);
    for i in 0..rest {
        let m = if i == rest - 1 {
            low
        } else {
            high - (high - low) * F::from_count(i as u64) / steps
        };
        means.push(m);
    }
    Ok(means)
}

/// Splits `[num_arms]` into `num_agents` contiguous, nearly equal blocks; the
/// first `num_arms % num_agents` agents get one extra arm.
pub fn partition_sticky_sets(num_arms: usize, num_agents: usize) -> Result<Vec<ArmSet>> {
    if num_agents == 0 {
        return Err(Error::NoAgents);
    }
    if num_arms < num_agents {
        return Err(Error::FewerArmsThanAgents {
            arms: num_arms,
            agents: num_agents,
        });
    }
    let base = num_arms / num_agents;
    let extra = num_arms % num_agents;
    Ok((0..num_agents)
        .map(|n| {
            let start = n * base + n.min(extra);
            let size = base + usize::from(n < extra);
            ArmSet::range(start, start + size)
        })
        .collect())
}
