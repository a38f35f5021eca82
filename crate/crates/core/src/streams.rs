//! Named random streams derived from one master seed.
//!
//! Every stream is a ChaCha8 generator keyed by the master seed with a
//! distinct 64-bit stream id, so streams never overlap and adding draws to
//! one of them leaves all others untouched.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// What a stream is used for inside one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    /// True environment draw from the prior.
    Environment,
    /// Reward noise for one arm; shared by every agent in the trial.
    Reward { arm: u32 },
    /// Posterior sampling and action randomization for one agent.
    Agent { index: u32 },
    /// Prior samples for the target comparison.
    Targets,
}

impl Purpose {
    fn code(self) -> u64 {
        match self {
            Purpose::Environment => 1,
            Purpose::Targets => 2,
            Purpose::Reward { arm } => (1 << 32) | u64::from(arm),
            Purpose::Agent { index } => (2 << 32) | u64::from(index),
        }
    }
}

/// Stream for `(trial, purpose)` under `master_seed`.
pub fn stream(master_seed: u64, trial: u32, purpose: Purpose) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    // Trial in the top bits, purpose below; purpose codes stay under 2^34.
    rng.set_stream((u64::from(trial) << 34) ^ purpose.code());
    rng
}
