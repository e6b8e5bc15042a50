//! Counter-based Bernoulli reward streams.
//!
//! Every reward is a keyed pseudorandom function of
//! `(master_seed, run, agent, arm, pull)`, so two policies replaying the same
//! run see the same `s`-th reward of each arm no matter in which order they
//! pull arms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a seed with a sequence of counters into a 64-bit key.
#[inline]
pub fn mix_key(seed: u64, words: &[u64]) -> u64 {
    words
        .iter()
        .fold(splitmix64(seed), |h, &w| splitmix64(h ^ w))
}

/// Domain tags separating independent uses of the master seed.
const REWARD_DOMAIN: u64 = 0x5245_5741_5244_0001;
const GOSSIP_DOMAIN: u64 = 0x474F_5353_4950_0002;

/// Deterministic generator for the gossip partner draws of one run.
pub fn gossip_rng(master_seed: u64, run: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_key(master_seed, &[GOSSIP_DOMAIN, run]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RewardStream {
    master_seed: u64,
    means: Vec<f64>,
}

impl RewardStream {
    pub fn new<F: Scalar>(master_seed: u64, means: &[F]) -> Self {
        Self {
            master_seed,
            means: means.iter().map(|m| m.as_f64()).collect(),
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn num_arms(&self) -> usize {
        self.means.len()
    }

    /// Uniform draw in `[0, 1)` behind reward `(run, agent, arm, pull)`.
    ///
    /// Depends only on the seed and the key, not on the means, so instances
    /// that differ only in their means share the same randomness.
    #[inline]
    pub fn uniform(&self, run: u64, agent: usize, arm: usize, pull: u64) -> f64 {
        let h = mix_key(
            self.master_seed ^ REWARD_DOMAIN,
            &[run, agent as u64, arm as u64, pull],
        );
        (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// The `pull`-th reward (1-based) of `arm` for `agent` in `run`.
    #[inline]
    pub fn reward(&self, run: u64, agent: usize, arm: usize, pull: u64) -> u8 {
        u8::from(self.uniform(run, agent, arm, pull) < self.means[arm])
    }
}
