//! Seeded sampling shared by the modules that split or subsample corpora.

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic generator used for every sampling step.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a string into a seed so per-language streams differ.
pub fn derive_seed(seed: u64, key: &str) -> u64 {
    // FNV-1a over the key, folded into the seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in key.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    seed ^ h.rotate_left(17)
}

/// The first `k` entries of a partial Fisher-Yates shuffle of `0..n`.
///
/// For a fixed generator state the result for `k` is a prefix of the
/// result for any larger `k`.
pub fn sample_indices<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let k = k.min(n);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + rng.random_range(0..(n - i) as u64) as usize;
        idx.swap(i, j);
    }
    idx.truncate(k);
    idx
}

/// A seeded permutation of `0..n`.
pub fn permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    sample_indices(rng, n, n)
}

/// Splits `items` into `(head, tail)` after a seeded shuffle; `head` gets
/// `floor(len * fraction)` items.
pub fn shuffle_split<T: Clone>(items: &[T], fraction: f64, seed: u64) -> (Vec<T>, Vec<T>) {
    let mut r = rng(seed);
    let order = permutation(&mut r, items.len());
    let cut = crate::math::floor(items.len() as f64 * fraction) as usize;
    let head = order[..cut].iter().map(|&i| items[i].clone()).collect();
    let tail = order[cut..].iter().map(|&i| items[i].clone()).collect();
    (head, tail)
}
