//! Stable seed derivation.
//!
//! Every random decision in a run is drawn from a ChaCha stream whose seed is a
//! SHA-256 digest of the master seed and a per-item key, so results do not
//! depend on worker count, iteration order or the platform's hasher.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Accumulates key material for one derived seed.
#[derive(Clone)]
pub struct SeedKey {
    hasher: Sha256,
}

impl SeedKey {
    pub fn new(master: u64) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(master.to_le_bytes());
        Self { hasher }
    }

    pub fn str(mut self, s: &str) -> Self {
        // length prefix so ("ab","c") and ("a","bc") differ
        self.hasher.update((s.len() as u64).to_le_bytes());
        self.hasher.update(s.as_bytes());
        self
    }

    pub fn int(mut self, v: u64) -> Self {
        self.hasher.update(v.to_le_bytes());
        self
    }

    pub fn finish(self) -> u64 {
        let digest = self.hasher.finalize();
        let mut bytes = [0u8; 8];
        bytes.copy_from_slice(&digest[..8]);
        u64::from_le_bytes(bytes)
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.finish())
    }
}

/// Seed for one sample: master seed, passage id and mention span.
pub fn sample_seed(master: u64, passage_id: &str, span: (usize, usize)) -> u64 {
    SeedKey::new(master)
        .str(passage_id)
        .int(span.0 as u64)
        .int(span.1 as u64)
        .finish()
}

/// Uniform value in [0, 1) derived from a passage id alone.
pub fn unit_hash(passage_id: &str) -> f64 {
    let h = SeedKey::new(0).str("split").str(passage_id).finish();
    (h >> 11) as f64 / (1u64 << 53) as f64
}
