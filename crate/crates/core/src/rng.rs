//! Seeded pseudo-random stream used by every stochastic component.
//!
//! The generator is xoshiro256** with its 256-bit state expanded from a
//! 64-bit seed by SplitMix64, exactly as recommended by the xoshiro authors.
//! Both algorithms are implemented here (a few lines each) so that the bit
//! stream is pinned by this crate rather than by an external dependency —
//! reports carry their seed, and replaying a seed must reproduce runs
//! byte-for-byte across versions and platforms.
//!
//! Draw order is part of the public contract: callers (the GA loop in
//! particular) document exactly which draws they make, in which order, so a
//! given seed fixes the entire run.

/// SplitMix64 step: advances `state` and returns the next output.
///
/// Constants are the standard ones from Steele, Lea and Flood's SplitMix
/// generator.
pub(crate) fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic xoshiro256** stream seeded from a single `u64`.
#[derive(Debug, Clone)]
pub struct RngStream {
    s: [u64; 4],
    seed: u64,
}

impl RngStream {
    /// Seeds the 256-bit state with four consecutive SplitMix64 outputs.
    pub fn new(seed: u64) -> Self {
        let mut sm = seed;
        let s = [
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
        ];
        Self { s, seed }
    }

    /// The seed this stream was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Next raw 64-bit output (xoshiro256**).
    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform double in `[0, 1)` using the top 53 bits of one output.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform double in `[lo, hi)`.
    pub fn next_range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Bernoulli draw: true with probability `p` (one uniform consumed).
    pub fn next_bool(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Uniform integer in `[0, n)` by rejection sampling, so every value is
    /// exactly equally likely. Panics if `n == 0`.
    pub fn next_below(&mut self, n: usize) -> usize {
        assert!(n > 0, "next_below requires n > 0");
        let n = n as u64;
        // Largest multiple of n that fits in u64; reject draws above it.
        let zone = u64::MAX - (u64::MAX % n + 1) % n;
        loop {
            let v = self.next_u64();
            if v <= zone {
                return (v % n) as usize;
            }
        }
    }

    /// Standard normal draw via the Box-Muller transform (cosine branch).
    /// Consumes exactly two uniforms.
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        // 1 - u1 is in (0, 1], so the log is always finite.
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        r * (2.0 * std::f64::consts::PI * u2).cos()
    }
}
