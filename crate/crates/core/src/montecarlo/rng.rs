//! Counter-based normal streams.
//!
//! Draws are produced in chunks of [`CHUNK`] samples; chunk `c` reads
//! ChaCha8 stream `c` under the batch key, so any chunk can be regenerated
//! on its own and chunks can be produced concurrently.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::normal::quantile_unchecked;

pub const GENERATOR_VERSION: &str = "chacha8-as241-v1";

/// Samples per stream.
pub const CHUNK: usize = 1 << 16;

/// Standard normals by inversion of a uniform on the open interval.
pub struct NormalStream {
    rng: ChaCha8Rng,
}

impl NormalStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    /// Uniform in `(0, 1)`: the top 53 bits, centered in their cell.
    pub fn next_uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        quantile_unchecked(self.next_uniform())
    }

    pub fn next_below(&mut self, bound: usize) -> usize {
        // Multiply-shift; the bias is below 2^-40 for the sizes used here.
        ((self.rng.next_u64() as u128 * bound as u128) >> 64) as usize
    }
}

/// `(chunk index, draws in chunk)` for `count` draws.
pub fn chunks(count: usize) -> impl Iterator<Item = (u64, usize)> + Clone {
    (0..count.div_ceil(CHUNK)).map(move |c| (c as u64, CHUNK.min(count - c * CHUNK)))
}
