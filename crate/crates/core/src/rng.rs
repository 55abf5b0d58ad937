//! Deterministic seed fan-out.
//!
//! A master seed is split into independent substreams with a counter-based
//! scheme: SplitMix64 mixes `(seed, index)` into a fresh ChaCha key, and
//! per-mode streams use the ChaCha stream counter. Growing the number of
//! replicas or modes never perturbs the streams already drawn.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the `index`-th subseed of `master`.
pub fn split_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ index.wrapping_mul(GOLDEN_GAMMA))
}

/// RNG for a given `(seed, stream)` pair. Distinct streams with the same
/// seed are independent ChaCha streams.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn split_seed_is_stable_and_injective_in_practice() {
        let a = split_seed(42, 0);
        let b = split_seed(42, 1);
        let c = split_seed(43, 0);
        assert_eq!(a, split_seed(42, 0));
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn streams_differ_and_reproduce() {
        let mut r0 = stream_rng(7, 0);
        let mut r1 = stream_rng(7, 1);
        let x0 = r0.next_u64();
        assert_ne!(x0, r1.next_u64());
        assert_eq!(x0, stream_rng(7, 0).next_u64());
    }
}
