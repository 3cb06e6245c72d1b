//! Deterministic pseudo-random numbers for reproducible experiments.
//!
//! A plain 64-bit linear congruential generator with Knuth's MMIX constants
//! (multiplier 6364136223846793005, increment 1442695040888963407). The
//! update is pure wrapping integer arithmetic, so any language reproduces
//! the same stream bit for bit. Doubles take the top 53 bits of the state.

/// 64-bit LCG: `state <- state * 6364136223846793005 + 1442695040888963407`.
#[derive(Clone, Debug)]
pub struct Lcg64 {
    state: u64,
}

const MULTIPLIER: u64 = 6364136223846793005;
const INCREMENT: u64 = 1442695040888963407;

impl Lcg64 {
    /// Seeds the generator; the seed is the initial state verbatim.
    pub fn new(seed: u64) -> Self {
        Lcg64 { state: seed }
    }

    /// Advances the state and returns it.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        self.state
    }

    /// Uniform in [0, 1): top 53 bits scaled by 2^-53.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform in [-1, 1).
    pub fn symmetric(&mut self) -> f64 {
        self.uniform(-1.0, 1.0)
    }
}
