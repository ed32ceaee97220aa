//! Reproducible per-sample random streams.
//!
//! Every sample index gets its own ChaCha8 stream derived from the run seed,
//! so a sample's draws do not depend on how samples are split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

pub fn sample_stream(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
