//! Seedable pseudo-random numbers for reproducible system families.
//!
//! The generator is SplitMix64 (Steele, Lea & Flood's `splitmix64` finaliser
//! over a Weyl sequence). It is tiny, has no platform-dependent state, and the
//! uniform mapping below is fixed, so a seed identifies a family of systems
//! bit for bit on every platform. [`SCHEME_VERSION`] is bumped if either the
//! generator or the mapping ever changes.

/// Version of the seeding + uniform-sampling scheme.
pub const SCHEME_VERSION: u32 = 1;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`: the top 53 bits scaled by 2^-53.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.next_f64() * (hi - lo)
    }

    /// Derive an independent child seed. Member `i` of a family uses
    /// `derive_seed` output `i`, so members can be generated in any order or
    /// in parallel without changing the family.
    pub fn derive_seed(&mut self) -> u64 {
        self.next_u64()
    }
}
