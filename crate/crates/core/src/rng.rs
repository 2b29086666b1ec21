//! Seedable, splittable counter-based uniform generator.
//!
//! Draw `i` of stream `key` is `mix64(key + (i + 1) · γ)` where `γ` is the
//! 64-bit golden-ratio increment and `mix64` is the SplitMix64 finalizer.
//! A stream is therefore a pure function of `(key, i)`: two generators built
//! from the same seed produce bitwise identical sequences, and any draw can
//! be recomputed without replaying the ones before it. Child streams get a
//! key derived by mixing the parent key with a stream index, so splits are
//! independent of how many values the parent has already produced.
//!
//! Uniforms use the top 53 bits: `u = (x >> 11 + 1/2) · 2^{−53}`, which lies
//! strictly inside `(0, 1)`.

use serde::{Deserialize, Serialize};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// User-facing seed for every random operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

impl From<u64> for RngSeed {
    fn from(seed: u64) -> Self {
        RngSeed(seed)
    }
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: RngSeed) -> Self {
        Self {
            key: mix64(seed.0 ^ 0x6A09_E667_F3BC_C908),
            counter: 0,
        }
    }

    /// Independent child stream number `stream`.
    pub fn split(&self, stream: u64) -> Self {
        Self {
            key: mix64(self.key ^ mix64(stream.wrapping_add(1).wrapping_mul(GOLDEN))),
            counter: 0,
        }
    }

    /// The `i`-th raw output of this stream, independent of the cursor.
    pub fn at(&self, i: u64) -> u64 {
        mix64(self.key.wrapping_add(i.wrapping_add(1).wrapping_mul(GOLDEN)))
    }

    pub fn next_u64(&mut self) -> u64 {
        let x = self.at(self.counter);
        self.counter = self.counter.wrapping_add(1);
        x
    }

    /// Uniform variate strictly inside (0, 1).
    pub fn next_uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniforms(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.next_uniform()).collect()
    }
}
