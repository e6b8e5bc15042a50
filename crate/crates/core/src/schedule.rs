//! Phase boundaries `A_j` for communication rounds.

use crate::error::{Error, Result};

/// Boundaries `A_j = round(j^(theta + 1))`, `A_0 = 0`, so phase lengths grow
/// like `j^theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSchedule {
    theta: f64,
}

impl PhaseSchedule {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() || theta <= 0.0 {
            return Err(Error::InvalidTheta(theta));
        }
        Ok(Self { theta })
    }

    /// `A_j = j^3`.
    pub fn cubic() -> Self {
        Self { theta: 2.0 }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// End of phase `j`; saturates at `u64::MAX`.
    pub fn boundary(&self, j: u64) -> u64 {
        let exponent = self.theta + 1.0;
        if exponent.fract() == 0.0 && exponent <= 64.0 {
            return j.checked_pow(exponent as u32).unwrap_or(u64::MAX);
        }
        let a = (j as f64).powf(exponent).round();
        if a >= u64::MAX as f64 {
            u64::MAX
        } else {
            a as u64
        }
    }

    /// `A_j - A_{j-1}` for `j >= 1`.
    pub fn phase_length(&self, j: u64) -> u64 {
        assert!(j >= 1, "phases are numbered from 1");
        self.boundary(j) - self.boundary(j - 1)
    }

    /// Phase containing step `t >= 1`.
    pub fn phase_of(&self, t: u64) -> u64 {
        let mut j = ((t as f64).powf(1.0 / (self.theta + 1.0)).floor() as u64).max(1);
        while j > 1 && self.boundary(j - 1) >= t {
            j -= 1;
        }
        while self.boundary(j) < t {
            j += 1;
        }
        j
    }

    /// Smallest `C >= 1` with `j^theta / C <= A_j - A_{j-1} <= C j^theta` for
    /// all `1 <= j <= last_phase`.
    pub fn growth_constant(&self, last_phase: u64) -> f64 {
        (1..=last_phase)
            .map(|j| {
                let len = self.phase_length(j) as f64;
                let scale = (j as f64).powf(self.theta);
                (len / scale).max(scale / len)
            })
            .fold(1.0, f64::max)
    }

    pub fn satisfies_growth_condition(&self, c: f64, last_phase: u64) -> bool {
        c >= 1.0 && self.growth_constant(last_phase) <= c
    }
}
