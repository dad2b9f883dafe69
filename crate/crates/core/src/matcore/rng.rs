//! Seeded, splittable random streams.
//!
//! Every stream is a ChaCha8 counter-mode generator keyed by a 64-bit seed
//! and addressed by a 64-bit stream id, so any random draw can be replayed
//! from the `(seed, stream)` pair alone.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Replay coordinates of a random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamId {
    pub seed: u64,
    pub stream: u64,
}

#[derive(Debug, Clone)]
pub struct SeededStream {
    id: StreamId,
    rng: ChaCha8Rng,
}

impl SeededStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self {
            id: StreamId { seed, stream },
            rng,
        }
    }

    pub fn id(&self) -> StreamId {
        self.id
    }

    /// Derives an independent child stream. Children of distinct parents
    /// or distinct indices never share a stream id.
    pub fn split(&self, index: u64) -> SeededStream {
        let stream = splitmix(self.id.stream ^ splitmix(index.wrapping_add(0x9e37_79b9)));
        SeededStream::with_stream(self.id.seed, stream)
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Standard complex Gaussian: independent real and imaginary parts of
    /// variance 1/2, so `E|z|^2 = 1`.
    pub fn complex_normal(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(self.normal() * s, self.normal() * s)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn int_range(&mut self, lo: i64, hi_inclusive: i64) -> i64 {
        self.rng.random_range(lo..=hi_inclusive)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.random_range(0..len)
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
