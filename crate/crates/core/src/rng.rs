//! Seeded, order-independent randomness.
//!
//! Every stochastic routine in this crate draws from a ChaCha stream keyed by
//! a master seed, one stream per trial. A trial's randomness therefore depends
//! only on `(seed, trial_index)`, never on evaluation order or thread count,
//! so parallel runs reproduce sequential ones bit for bit.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// RNG for trial `index` of an experiment keyed by `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Derives an independent child seed for a tagged sub-experiment
/// (splitmix64 finalizer over seed and tag).
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ splitmix64(tag))
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `trials` independent trials in parallel and returns their results in
/// trial order. Trial `i` sees exactly `trial_rng(seed, i)`.
pub fn parallel_trials<T, F>(trials: u64, seed: u64, per_trial: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            per_trial(&mut rng)
        })
        .collect()
}
