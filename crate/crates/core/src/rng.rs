//! Counter-addressed random streams.
//!
//! Every draw in the crate comes from `ChaCha8Rng::seed_from_u64(seed)`
//! (rand_chacha 0.9) positioned on a named stream and word offset:
//!
//! * stream = `purpose << 56 | key`, where `key` is the day index for
//!   per-day streams and 0 for query workloads;
//! * word position = `chunk_index << 32`, one chunk per [`CHUNK`] items.
//!
//! A chunk therefore owns 2^32 words of keystream, and any chunk can be
//! generated without touching the others. Changing this layout changes every
//! generated output, so it is part of the crate's compatibility surface.
//!
//! [`CHUNK`]: crate::exec::CHUNK

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    DailyVolume = 1,
    Entries = 2,
    Queries = 3,
}

pub fn stream(seed: u64, purpose: Purpose, key: u64, chunk: u64) -> ChaCha8Rng {
    debug_assert!(key < 1 << 56);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((purpose as u64) << 56) | key);
    rng.set_word_pos(u128::from(chunk) << 32);
    rng
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
