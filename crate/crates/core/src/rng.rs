//! Counter-based random streams.
//!
//! Every stochastic operation draws from a [`StreamSeed`]: a run seed plus an
//! operation tag. Trial `k` always uses ChaCha stream `k` under a key derived
//! from `(seed, tag)`, so any trial can be replayed on its own and results do
//! not depend on how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamSeed {
    pub seed: u64,
    pub tag: u64,
}

impl StreamSeed {
    pub fn new(seed: u64, tag: u64) -> Self {
        Self { seed, tag }
    }

    /// A child stream family, e.g. one per grid point of a sweep.
    pub fn child(&self, index: u64) -> Self {
        Self {
            seed: self.seed,
            tag: splitmix64(self.tag ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d))),
        }
    }

    pub fn trial(&self, trial: u64) -> TrialRng {
        let mut key = [0u8; 32];
        let mut state = self.seed ^ splitmix64(self.tag);
        for chunk in key.chunks_exact_mut(8) {
            state = splitmix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(trial);
        rng
    }
}

/// Tags for the stochastic operations of the crate.
pub mod tags {
    pub const PPP: u64 = 0x7070_7000;
    pub const INTERFERENCE: u64 = 0x1f1f_0001;
    pub const ORDER_STATISTICS: u64 = 0x0d15_0002;
    pub const UTILITY_MC: u64 = 0x0071_0003;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
