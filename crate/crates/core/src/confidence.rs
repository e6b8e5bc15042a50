//! Bernoulli KL divergence, the exploration function `f_alpha`, and the
//! KL-UCB / Hoeffding upper confidence indices built on it.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Bisection iteration cap for [`kl_ucb_from_budget`].
pub const MAX_BISECTION_STEPS: usize = 100;

/// Which confidence bound an agent ranks arms by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexFamily {
    Kl,
    Hoeffding,
}

impl IndexFamily {
    pub fn name(self) -> &'static str {
        match self {
            IndexFamily::Kl => "KL",
            IndexFamily::Hoeffding => "Hoeffding",
        }
    }
}

/// Confidence-bound family together with its exploration exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexKind<F> {
    family: IndexFamily,
    alpha: F,
}

impl<F: Scalar> IndexKind<F> {
    pub fn new(family: IndexFamily, alpha: F) -> Result<Self> {
        if !alpha.is_finite() || alpha <= F::zero() {
            return Err(Error::InvalidAlpha(alpha.as_f64()));
        }
        Ok(Self { family, alpha })
    }

    pub fn kl(alpha: F) -> Result<Self> {
        Self::new(IndexFamily::Kl, alpha)
    }

    pub fn hoeffding(alpha: F) -> Result<Self> {
        Self::new(IndexFamily::Hoeffding, alpha)
    }

    pub fn family(&self) -> IndexFamily {
        self.family
    }

    pub fn alpha(&self) -> F {
        self.alpha
    }

    /// `ln f_alpha(t)`, shared by every arm at step `t`.
    pub fn budget(&self, t: u64) -> F {
        exploration_budget(t.max(1), self.alpha)
    }

    /// Index of an arm with `pulls` plays and empirical mean `mu_hat` given
    /// the step's exploration budget.
    pub fn index_from_budget(&self, mu_hat: F, pulls: u64, budget: F) -> F {
        if pulls == 0 {
            return F::infinity();
        }
        match self.family {
            IndexFamily::Kl => kl_ucb_from_budget(mu_hat, budget / F::from_count(pulls)),
            IndexFamily::Hoeffding => {
                mu_hat + (budget / (F::lit(2.0) * F::from_count(pulls))).sqrt()
            }
        }
    }
}

fn check_probability<F: Scalar>(p: F) -> Result<()> {
    if p >= F::zero() && p <= F::one() {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange(p.as_f64()))
    }
}

/// `KL(Bernoulli(p) || Bernoulli(q))` in nats.
pub fn kl_bernoulli<F: Scalar>(p: F, q: F) -> Result<F> {
    check_probability(p)?;
    check_probability(q)?;
    Ok(kl_unchecked(p, q))
}

/// [`kl_bernoulli`] without range checks; callers guarantee `p, q` in `[0, 1]`.
#[inline]
pub(crate) fn kl_unchecked<F: Scalar>(p: F, q: F) -> F {
    let zero = F::zero();
    let one = F::one();
    if p == q {
        return zero;
    }
    if q <= zero || q >= one {
        return F::infinity();
    }
    // 0 * ln(0 / x) = 0
    let head = if p > zero { p * (p / q).ln() } else { zero };
    let tail = if p < one {
        (one - p) * ((one - p) / (one - q)).ln()
    } else {
        zero
    };
    (head + tail).max(zero)
}

/// `f_alpha(t) = 1 + t^alpha * ln(t)^2`.
pub fn f_alpha<F: Scalar>(t: u64, alpha: F) -> Result<F> {
    if t == 0 {
        return Err(Error::ZeroTimeStep);
    }
    Ok(f_alpha_unchecked(t, alpha))
}

#[inline]
fn f_alpha_unchecked<F: Scalar>(t: u64, alpha: F) -> F {
    let t = F::from_count(t);
    let log_t = t.ln();
    F::one() + t.powf(alpha) * log_t * log_t
}

/// `ln f_alpha(t)`; zero at `t = 1`.
#[inline]
pub fn exploration_budget<F: Scalar>(t: u64, alpha: F) -> F {
    f_alpha_unchecked(t, alpha).ln()
}

/// Largest `u` in `[0, 1]` with `KL(mu_hat, u) <= ln f_alpha(t) / pulls`;
/// `+inf` for an unplayed arm.
pub fn kl_ucb_index<F: Scalar>(mu_hat: F, pulls: u64, t: u64, alpha: F) -> Result<F> {
    check_probability(mu_hat)?;
    let budget = f_alpha(t, alpha)?.ln();
    if pulls == 0 {
        return Ok(F::infinity());
    }
    Ok(kl_ucb_from_budget(mu_hat, budget / F::from_count(pulls)))
}

/// Bisection for `max { u in [mu_hat, 1] : KL(mu_hat, u) <= threshold }`.
///
/// The upper bracket starts at `mu_hat + sqrt(threshold / 2)` (Pinsker) capped
/// at 1. Returns the feasible end of the final bracket, so the result always
/// satisfies the defining inequality.
pub fn kl_ucb_from_budget<F: Scalar>(mu_hat: F, threshold: F) -> F {
    KlBracket::new(mu_hat, threshold).resolve()
}

/// In-progress bisection for one KL-UCB index.
///
/// Until resolved the final index lies in `[lo, hi)`; once resolved it is
/// exactly `lo`. Refining step by step follows the same path as
/// [`kl_ucb_from_budget`], so comparisons decided on partial brackets agree
/// with comparisons of fully computed indices.
#[derive(Debug, Clone, Copy)]
pub(crate) struct KlBracket<F> {
    mu_hat: F,
    /// `mu ln mu + (1 - mu) ln(1 - mu)`, so `KL(mu, u) = neg_entropy - cross(u)`.
    neg_entropy: F,
    threshold: F,
    lo: F,
    hi: F,
    steps: usize,
    resolved: bool,
}

impl<F: Scalar> KlBracket<F> {
    pub(crate) fn new(mu_hat: F, threshold: F) -> Self {
        let one = F::one();
        let xlogx = |x: F| if x > F::zero() { x * x.ln() } else { F::zero() };
        let mut b = Self {
            mu_hat,
            neg_entropy: xlogx(mu_hat) + xlogx(one - mu_hat),
            threshold,
            lo: mu_hat,
            hi: mu_hat,
            steps: 0,
            resolved: true,
        };
        if threshold.is_nan() || threshold <= F::zero() {
            return b;
        }
        let hi = (mu_hat + (threshold / F::lit(2.0)).sqrt()).min(F::one());
        if kl_unchecked(mu_hat, hi) <= threshold {
            b.lo = hi;
            b.hi = hi;
            return b;
        }
        b.hi = hi;
        b.resolved = b.hi - b.lo <= F::bisection_tolerance();
        b
    }

    fn width(&self) -> F {
        if self.resolved {
            F::zero()
        } else {
            self.hi - self.lo
        }
    }

    /// One bisection step.
    fn refine(&mut self) {
        if self.resolved {
            return;
        }
        let mid = (self.lo + self.hi) * F::lit(0.5);
        if self.divergence(mid) <= self.threshold {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
        self.steps += 1;
        self.resolved =
            self.hi - self.lo <= F::bisection_tolerance() || self.steps >= MAX_BISECTION_STEPS;
    }

    /// `KL(mu_hat, u)` for `u` strictly inside `(mu_hat, 1)`.
    #[inline]
    fn divergence(&self, u: F) -> F {
        let one = F::one();
        let mut cross = (one - self.mu_hat) * (one - u).ln();
        if self.mu_hat > F::zero() {
            cross = cross + self.mu_hat * u.ln();
        }
        (self.neg_entropy - cross).max(F::zero())
    }

    pub(crate) fn resolve(mut self) -> F {
        while !self.resolved {
            self.refine();
        }
        self.lo
    }

    /// Whether this index is strictly larger than `other`'s, refining either
    /// bracket only as far as needed.
    pub(crate) fn exceeds(&mut self, other: &mut Self) -> bool {
        loop {
            // final values: self in [self.lo, self.upper], other likewise
            let self_upper_le_other = if self.resolved {
                self.lo <= other.lo
            } else {
                self.hi <= other.lo
            };
            if self_upper_le_other {
                return false;
            }
            let other_upper_lt_self = if other.resolved {
                other.lo < self.lo
            } else {
                other.hi <= self.lo
            };
            if other_upper_lt_self {
                return true;
            }
            if self.resolved && other.resolved {
                return self.lo > other.lo;
            }
            if self.width() >= other.width() {
                self.refine();
            } else {
                other.refine();
            }
        }
    }
}

/// `mu_hat + sqrt(ln f_alpha(t) / (2 pulls))`, not clamped to 1; `+inf` when
/// unplayed.
pub fn hoeffding_index<F: Scalar>(mu_hat: F, pulls: u64, t: u64, alpha: F) -> Result<F> {
    check_probability(mu_hat)?;
    let budget = f_alpha(t, alpha)?.ln();
    if pulls == 0 {
        return Ok(F::infinity());
    }
    Ok(mu_hat + (budget / (F::lit(2.0) * F::from_count(pulls))).sqrt())
}
