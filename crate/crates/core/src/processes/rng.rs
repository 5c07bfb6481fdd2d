//! Random number generation.
//!
//! All generation uses ChaCha8 (`rand_chacha`), identified as `"chacha8"`.
//! A run with master seed `s` draws its sample from `ChaCha8Rng::seed_from_u64(s)`.
//! Replica `r` of a multi-replica run uses the same key with stream number `r`,
//! so replicas are independent and each one can be reproduced on its own.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const RNG_ID: &str = "chacha8";

pub fn master_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn replica_rng(master: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(replica);
    rng
}

/// A 64-bit seed for replica `r`, for APIs that take a seed rather than a generator.
pub fn replica_seed(master: u64, replica: u64) -> u64 {
    use rand::RngCore;
    replica_rng(master, replica).next_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn streams_differ() {
        let a = replica_rng(1, 0).next_u64();
        let b = replica_rng(1, 1).next_u64();
        assert_ne!(a, b);
        assert_eq!(replica_rng(1, 0).next_u64(), master_rng(1).next_u64());
    }
}
