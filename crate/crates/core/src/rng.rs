//! Seeded, stream-split randomness.
//!
//! Every random draw is made from a ChaCha8 generator keyed by one 64-bit
//! seed; independent tasks use distinct stream numbers, so results do not
//! depend on scheduling or worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn task_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
