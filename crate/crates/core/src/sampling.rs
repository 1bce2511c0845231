//! Seeded, chunked random streams.
//!
//! Work is split into fixed-size chunks and chunk `c` draws from
//! `ChaCha8Rng::seed_from_u64(chunk_seed(seed, c))`. Results therefore depend
//! only on the master seed, never on how many threads process the chunks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Number of samples per independently seeded chunk.
pub const CHUNK: u64 = 4096;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for chunk `chunk` under master seed `seed`.
pub fn chunk_seed(seed: u64, chunk: u64) -> u64 {
    splitmix64(seed ^ splitmix64(chunk))
}

pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(chunk_seed(seed, chunk))
}

/// `(chunk index, start, len)` for `total` items.
pub fn chunks(total: u64) -> impl Iterator<Item = (u64, u64, u64)> {
    let count = total.div_ceil(CHUNK);
    (0..count).map(move |c| {
        let start = c * CHUNK;
        (c, start, CHUNK.min(total - start))
    })
}
