//! Seeded random subsets.
//!
//! Every sample owns a ChaCha8 stream seeded with `seed + index` (wrapping),
//! so sampled reports do not depend on how samples are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::set::ElementSet;

pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(index))
}

/// A uniformly random `size`-subset of `[0, q)` by a partial Fisher-Yates
/// shuffle of the index array.
pub fn random_subset<R: Rng>(q: u32, size: usize, rng: &mut R) -> ElementSet {
    assert!(size <= q as usize, "subset larger than the field");
    let mut idx: Vec<u32> = (0..q).collect();
    for i in 0..size {
        let j = rng.gen_range(i..q as usize);
        idx.swap(i, j);
    }
    ElementSet::from_elements(q, idx[..size].iter().copied()).expect("indices are in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_reproducibility() {
        for size in [0, 1, 5, 13] {
            let a = random_subset(13, size, &mut sample_rng(7, 3));
            let b = random_subset(13, size, &mut sample_rng(7, 3));
            assert_eq!(a.len(), size);
            assert_eq!(a, b);
        }
        let a = random_subset(1009, 20, &mut sample_rng(7, 3));
        let b = random_subset(1009, 20, &mut sample_rng(7, 4));
        assert_ne!(a, b);
    }
}
