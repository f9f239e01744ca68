//! Deterministic pseudo-random numbers for reproducible sampling.
//!
//! A fixed in-crate generator (rather than a pluggable external one) keeps
//! seeded verification runs byte-for-byte reproducible across platforms and
//! dependency upgrades: the sequence below is pinned by unit tests.

/// SplitMix64: 64 bits of state, one add and two xor-multiply mixes per
/// draw. Passes BigCrush when used as a stream; here it only needs to be
/// deterministic, well distributed, and tiny.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Next 64 uniformly distributed bits.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1): the top 53 bits scaled by 2^{-53}.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}
