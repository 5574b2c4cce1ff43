//! Support/validation split by a seeded hash of the instance id, so the
//! partition does not depend on file order.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const DEFAULT_SUPPORT_FRACTION: f64 = 0.8;

/// Uniform value in `[0, 1)` from SHA-256 of the seed and id.
fn unit(seed: u64, id: &str) -> f64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(id.as_bytes());
    let digest = h.finalize();
    let mut word = [0u8; 8];
    word.copy_from_slice(&digest[..8]);
    (u64::from_be_bytes(word) >> 11) as f64 / (1u64 << 53) as f64
}

pub fn is_support(id: &str, seed: u64, support_fraction: f64) -> bool {
    unit(seed, id) < support_fraction
}

/// Partitions `items` into (support, validation), preserving input order.
pub fn split_by_id<T>(
    items: impl IntoIterator<Item = T>,
    id: impl Fn(&T) -> &str,
    seed: u64,
    support_fraction: f64,
) -> Result<(Vec<T>, Vec<T>)> {
    if !(0.0..=1.0).contains(&support_fraction) {
        return Err(Error::Config(format!("support fraction must be in [0, 1], got {support_fraction}")));
    }
    Ok(items.into_iter().partition(|x| is_support(id(x), seed, support_fraction)))
}
