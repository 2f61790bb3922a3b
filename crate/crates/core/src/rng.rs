//! Counter-based randomness.
//!
//! Every random draw in the crate is a pure function of a 64-bit key and a
//! 64-bit counter, computed with the SplitMix64 output function:
//!
//! ```text
//! mix64(key, i) = fmix(key + (i + 1) * 0x9E3779B97F4A7C15)
//! fmix(z)       = z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!                 z ^= z >> 27; z *= 0x94D049BB133111EB;
//!                 z ^ (z >> 31)
//! ```
//!
//! `mix64(key, i)` is exactly the `i`-th output of a SplitMix64 generator
//! seeded with `key`, so results are reproducible on every platform and can
//! be computed out of order (parallel Monte-Carlo samples, per-element draws).

use rand::RngCore;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn fmix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The `index`-th SplitMix64 output for state `key`.
#[inline]
pub fn mix64(key: u64, index: u64) -> u64 {
    fmix(key.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
}

/// Maps 64 random bits to a double in `[0, 1)` using the top 53 bits.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A SplitMix64 stream: `next_u64` returns `mix64(key, 0)`, `mix64(key, 1)`, ...
///
/// Implements [`RngCore`] so the `rand` adaptors (`random_range`, `shuffle`,
/// ...) work on top of it.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(key: u64) -> Self {
        CounterRng { key, counter: 0 }
    }

    /// An independent stream derived from `(key, stream)`.
    pub fn derive(key: u64, stream: u64) -> Self {
        CounterRng::new(mix64(key, stream))
    }

    pub fn next_unit(&mut self) -> f64 {
        unit_f64(self.next_u64())
    }
}

impl RngCore for CounterRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        let out = mix64(self.key, self.counter);
        self.counter = self.counter.wrapping_add(1);
        out
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}
