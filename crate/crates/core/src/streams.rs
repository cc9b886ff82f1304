//! Counter-derived random number streams.
//!
//! Every stochastic task in an experiment — sampling one evolution
//! circuit, running one shot — owns an RNG derived from the master seed
//! and the task's indices. Results are therefore independent of worker
//! count and scheduling order: the stream for `(seed, role, s, m, shot)`
//! is always the same bits.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Distinguishes the independent uses of randomness inside one task.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamRole {
    /// Gate-branch sampling for one evolution circuit (per `(s, m)`).
    Circuit,
    /// Noise trajectory, measurement bases, and readout for one shot
    /// (per `(s, m, shot)`).
    Shot,
    /// Free-standing validation and test draws.
    Validate,
}

impl StreamRole {
    fn tag(self) -> u64 {
        match self {
            StreamRole::Circuit => 0x63697263_75697400,  // "circuit"
            StreamRole::Shot => 0x73686f74_00000000,     // "shot"
            StreamRole::Validate => 0x76616c69_64617465, // "validate"
        }
    }
}

/// SplitMix64 step: the standard 64-bit finalizer-based mixer.
#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the RNG for one task.
///
/// The seed material chains the master seed, role tag, and indices
/// through SplitMix64 and expands to the 32-byte ChaCha key, so distinct
/// `(role, s, m, shot)` tuples get statistically independent streams.
pub fn derive(seed: u64, role: StreamRole, s: usize, m: usize, shot: usize) -> ChaCha8Rng {
    let mut state = seed ^ 0xA076_1D64_78BD_642F;
    for word in [role.tag(), s as u64, m as u64, shot as u64] {
        state ^= splitmix64(&mut state) ^ word.wrapping_mul(0xE703_7ED1_A0B4_28DB);
    }
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
