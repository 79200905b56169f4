//! Counting the subsets `B ⊆ B*(A)` with `A + B = Q`, split by `#B`.
//!
//! Each `b ∈ B*` covers the residues `A + b`; we need the subfamilies whose
//! union is all of `Q`. Small `B*` are enumerated directly; otherwise the
//! count comes from inclusion-exclusion over the residues left uncovered.

use crate::field::Field;
use crate::set::{translate, ElementSet};

/// Default largest `#B*` handled by direct subset enumeration.
pub const DIRECT_ENUMERATION_LIMIT: usize = 20;

/// Default largest `#Q` for inclusion-exclusion (a table of `2^#Q` bytes).
pub const DEFAULT_COUNT_LIMIT: usize = 24;

type Mask = Vec<u64>;

fn cover_masks(
    field: &Field,
    residues: &ElementSet,
    a: &ElementSet,
    bstar: &ElementSet,
) -> (Vec<Mask>, usize) {
    let positions: Vec<u32> = residues.iter().collect();
    let mut slot = vec![u32::MAX; field.q() as usize];
    for (i, &y) in positions.iter().enumerate() {
        slot[y as usize] = i as u32;
    }
    let width = positions.len().div_ceil(64);
    let masks = bstar
        .iter()
        .map(|b| {
            let mut m = vec![0u64; width];
            for y in translate(field, a, b).iter() {
                let s = slot[y as usize];
                debug_assert!(s != u32::MAX, "A + b must lie inside Q");
                m[s as usize / 64] |= 1 << (s % 64);
            }
            m
        })
        .collect();
    (masks, positions.len())
}

fn is_full(m: &[u64], bits: usize) -> bool {
    m.iter().enumerate().all(|(i, &w)| {
        let want = if (i + 1) * 64 <= bits {
            u64::MAX
        } else {
            (1u64 << (bits % 64)) - 1
        };
        w == want
    })
}

fn union(a: &[u64], b: &[u64]) -> Mask {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

/// `counts[m]` = number of `m`-subsets of `B*` whose translates of `A` cover
/// `Q`, or `None` when neither counting route fits within the limits.
pub fn covering_subsets_by_size(
    field: &Field,
    residues: &ElementSet,
    a: &ElementSet,
    bstar: &ElementSet,
    enumeration_limit: usize,
    count_limit: usize,
) -> Option<Vec<u64>> {
    let (masks, bits) = cover_masks(field, residues, a, bstar);
    if masks.len() <= enumeration_limit {
        Some(enumerate_direct(&masks, bits))
    } else if bits <= count_limit {
        inclusion_exclusion(&masks, bits)
    } else {
        None
    }
}

fn enumerate_direct(masks: &[Mask], bits: usize) -> Vec<u64> {
    let k = masks.len();
    let width = bits.div_ceil(64);
    // suffix[i] = union of masks[i..]
    let mut suffix = vec![vec![0u64; width]; k + 1];
    for i in (0..k).rev() {
        suffix[i] = union(&suffix[i + 1], &masks[i]);
    }
    let mut counts = vec![0u64; k + 1];
    fn rec(
        i: usize,
        size: usize,
        cur: &Mask,
        masks: &[Mask],
        suffix: &[Mask],
        bits: usize,
        counts: &mut [u64],
    ) {
        if !is_full(&union(cur, &suffix[i]), bits) {
            return;
        }
        if i == masks.len() {
            counts[size] += 1;
            return;
        }
        rec(
            i + 1,
            size + 1,
            &union(cur, &masks[i]),
            masks,
            suffix,
            bits,
            counts,
        );
        rec(i + 1, size, cur, masks, suffix, bits, counts);
    }
    rec(0, 0, &vec![0u64; width], masks, &suffix, bits, &mut counts);
    counts
}

fn inclusion_exclusion(masks: &[Mask], bits: usize) -> Option<Vec<u64>> {
    let size = 1usize << bits;
    let k = masks.len();
    // within[t] = #{b : cover(b) ⊆ t}, by a subset-sum (zeta) transform
    let mut within = vec![0u8; size];
    for m in masks {
        within[m[0] as usize] += 1;
    }
    for bit in 0..bits {
        let step = 1usize << bit;
        for t in 0..size {
            if t & step != 0 {
                within[t] += within[t ^ step];
            }
        }
    }
    // Coverage of Q is exclusion of every residue outside some t:
    // #covering m-subsets = Σ_t (-1)^{bits-|t|} C(within[t], m).
    let mut hist = vec![[0i128; 2]; k + 1];
    for (t, &w) in within.iter().enumerate() {
        let parity = (bits - t.count_ones() as usize) % 2;
        hist[w as usize][parity] += 1;
    }
    let mut binom = vec![vec![0i128; k + 1]; k + 1];
    for n in 0..=k {
        binom[n][0] = 1;
        for m in 1..=n {
            binom[n][m] = binom[n - 1][m - 1] + if m <= n - 1 { binom[n - 1][m] } else { 0 };
        }
    }
    (0..=k)
        .map(|m| {
            let total: i128 = (m..=k)
                .map(|w| (hist[w][0] - hist[w][1]) * binom[w][m])
                .sum();
            u64::try_from(total).ok()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(masks: &[Mask], bits: usize) -> Vec<u64> {
        let mut counts = vec![0u64; masks.len() + 1];
        for sel in 0u32..(1 << masks.len()) {
            let mut cur = vec![0u64; bits.div_ceil(64)];
            for (i, m) in masks.iter().enumerate() {
                if sel >> i & 1 == 1 {
                    cur = union(&cur, m);
                }
            }
            if is_full(&cur, bits) {
                counts[sel.count_ones() as usize] += 1;
            }
        }
        counts
    }

    #[test]
    fn routes_agree_on_random_families() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let bits = rng.gen_range(1..=10);
            let k = rng.gen_range(0..=12);
            let masks: Vec<Mask> = (0..k)
                .map(|_| vec![rng.gen_range(0..(1u64 << bits))])
                .collect();
            let expect = brute(&masks, bits);
            assert_eq!(enumerate_direct(&masks, bits), expect);
            assert_eq!(inclusion_exclusion(&masks, bits).unwrap(), expect);
        }
    }
}
