//! Reproducible random streams.
//!
//! Every run draws from its own ChaCha8 stream. Stream seeds are derived by
//! hashing `(master_seed, label, index)` with SHA-256, so a run's randomness
//! depends only on its own key and never on the order runs are executed in.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Generator used by all stochastic code in the crate.
pub type SearchRng = ChaCha8Rng;

/// Derives a 64-bit seed for stream `(label, index)` under `master_seed`.
pub fn derive_seed(master_seed: u64, label: &str, index: u64) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master_seed.to_le_bytes());
    hasher.update((label.len() as u64).to_le_bytes());
    hasher.update(label.as_bytes());
    hasher.update(index.to_le_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

pub fn rng_from_seed(seed: u64) -> SearchRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn stream(master_seed: u64, label: &str, index: u64) -> SearchRng {
    rng_from_seed(derive_seed(master_seed, label, index))
}
