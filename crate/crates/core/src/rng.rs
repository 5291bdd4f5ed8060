//! Deterministic random streams.
//!
//! Every stream is a xoshiro256++ generator (`rand_xoshiro::Xoshiro256PlusPlus`).
//! Its seed is derived from `(base_seed, replicate, tag)` by chaining the
//! SplitMix64 finalizer:
//!
//! ```text
//! h = mix(base_seed ^ GOLDEN)
//! h = mix(h ^ replicate)
//! h = mix(h ^ (tag << 56 | 0x5EED))
//! ```
//!
//! and the 64-bit result seeds the generator through `SeedableRng::seed_from_u64`,
//! which itself expands the seed with SplitMix64. Both algorithms are fixed,
//! so a given triple yields the same sequence on every platform.

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// Purpose tags for [`derive_stream`].
pub mod tags {
    pub const DATA: u8 = 0;
    pub const PLAN: u8 = 1;
    /// Reserved for stochastic models; no implemented model draws randomness.
    pub const MODEL: u8 = 2;
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The 64-bit seed behind [`derive_stream`].
pub fn derive_seed(base_seed: u64, replicate: u64, tag: u8) -> u64 {
    let h = mix64(base_seed ^ GOLDEN);
    let h = mix64(h ^ replicate);
    mix64(h ^ ((tag as u64) << 56 | 0x5EED))
}

/// A single-owner pseudo-random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    inner: Xoshiro256PlusPlus,
}

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        RngStream {
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform on [0, bound).
    pub fn index(&mut self, bound: usize) -> usize {
        self.inner.gen_range(0..bound)
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        use rand::seq::SliceRandom;
        items.shuffle(&mut self.inner);
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

pub fn derive_stream(base_seed: u64, replicate: u64, tag: u8) -> RngStream {
    RngStream::from_seed(derive_seed(base_seed, replicate, tag))
}
