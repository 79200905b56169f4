//! Brute-force oracle: every `A ⊆ F_q` with `#A >= 2`, no pruning.
//!
//! Deliberately shares nothing with the pruned engine beyond field addition:
//! sets are `u32` masks, `Q` comes from squaring by polynomial arithmetic,
//! and sumsets are formed pair by pair.

use std::time::Instant;

use super::{DecompositionCertificate, Mode, SearchConfig, SearchReport};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::set::ElementSet;

/// Largest order accepted by the oracle.
pub const ORACLE_MAX_ORDER: u32 = 17;

struct Oracle<'f> {
    field: &'f Field,
    q: u32,
    residues: u32,
}

impl<'f> Oracle<'f> {
    fn new(field: &'f Field) -> Self {
        let q = field.q();
        let residues = (1..q).fold(0u32, |m, x| m | 1 << field.mul_by_polynomials(x, x));
        Oracle { field, q, residues }
    }

    fn is_residue(&self, x: u32) -> bool {
        self.residues >> x & 1 == 1
    }

    fn members(mask: u32) -> impl Iterator<Item = u32> {
        (0..32).filter(move |i| mask >> i & 1 == 1)
    }

    /// `{y : y + x ∈ Q for all x ∈ set}`.
    fn partners(&self, set: u32) -> u32 {
        (0..self.q)
            .filter(|&y| Self::members(set).all(|x| self.is_residue(self.field.add(x, y))))
            .fold(0, |m, y| m | 1 << y)
    }

    fn sum(&self, a: u32, b: u32) -> u32 {
        let mut out = 0;
        for x in Self::members(a) {
            for y in Self::members(b) {
                out |= 1 << self.field.add(x, y);
            }
        }
        out
    }

    fn to_set(&self, mask: u32) -> ElementSet {
        ElementSet::from_elements(self.q, Self::members(mask)).expect("mask within field")
    }
}

fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut sub = mask;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & mask;
        }
        Some(cur)
    })
}

/// Exhaustive reference search; same report semantics as [`super::search`]
/// with every pruning switch off.
pub fn naive_search(field: &Field, mode: Mode) -> Result<SearchReport> {
    let start = Instant::now();
    if field.q() > ORACLE_MAX_ORDER {
        return Err(Error::FieldTooLargeForOracle(field.q()));
    }
    if mode == Mode::Shkredov {
        return Err(Error::Unsupported(
            "the oracle covers A + B decompositions only".into(),
        ));
    }
    let oracle = Oracle::new(field);
    let mut report = SearchReport::new(field, SearchConfig::unpruned(mode));
    let mut pairs = Vec::new();
    let mut n_q = 0u64;
    for a in 0u32..(1 << field.q()) {
        if a.count_ones() < 2 {
            continue;
        }
        report.nodes_explored += 1;
        let bstar = oracle.partners(a);
        if bstar.count_ones() < 2 || oracle.sum(a, bstar) != oracle.residues {
            continue;
        }
        let closed = oracle.partners(bstar) == a;
        match mode {
            Mode::Decide => {
                pairs.push((oracle.partners(bstar), bstar));
                break;
            }
            Mode::EnumerateMaximal | Mode::CountAll => {
                if closed {
                    pairs.push((a, bstar));
                }
            }
            Mode::Shkredov => unreachable!(),
        }
        if mode == Mode::CountAll {
            for b in submasks(bstar) {
                if b.count_ones() >= 2 && oracle.sum(a, b) == oracle.residues {
                    let key = (a.count_ones() as usize, b.count_ones() as usize);
                    *report.counts_by_size.entry(key).or_default() += 1;
                    n_q += 1;
                }
            }
        }
    }
    let mut certs: Vec<_> = pairs
        .into_iter()
        .map(|(a, b)| DecompositionCertificate::new(field, oracle.to_set(a), oracle.to_set(b)))
        .collect();
    certs.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
    report.certificates = certs;
    if mode == Mode::CountAll {
        report.n_q = Some(n_q);
    }
    report.notes.push("brute-force oracle".into());
    report.wall_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Exact `N(k, m, q)`.
pub fn count_by_size(field: &Field, k: usize, m: usize) -> Result<u64> {
    if k < 2 || m < 2 || k > field.q() as usize || m > field.q() as usize {
        return Err(Error::Domain(format!(
            "need 2 <= k, m <= q, got k = {k}, m = {m}"
        )));
    }
    Ok(naive_search(field, Mode::CountAll)?.count_for(k, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn small_primes_have_no_decompositions() {
        for p in [3, 5, 7] {
            let r = naive_search(&build_field(p, 1).unwrap(), Mode::CountAll).unwrap();
            assert_eq!(r.n_q, Some(0));
            assert!(r.none_found());
        }
    }

    #[test]
    fn size_limit() {
        let f = build_field(19, 1).unwrap();
        assert_eq!(
            naive_search(&f, Mode::CountAll).unwrap_err(),
            Error::FieldTooLargeForOracle(19)
        );
        assert!(count_by_size(&f, 2, 2).is_err());
    }

    #[test]
    fn count_by_size_examples() {
        let f7 = build_field(7, 1).unwrap();
        assert_eq!(count_by_size(&f7, 2, 2).unwrap(), 0);
        let f5 = build_field(5, 1).unwrap();
        assert_eq!(count_by_size(&f5, 3, 3).unwrap(), 0);
        assert!(count_by_size(&f5, 1, 3).is_err());
    }

    #[test]
    fn f9_swap_symmetry() {
        let f = build_field(3, 2).unwrap();
        let r = naive_search(&f, Mode::CountAll).unwrap();
        for k in 2..=9 {
            for m in 2..=9 {
                assert_eq!(r.count_for(k, m), r.count_for(m, k));
            }
        }
    }
}
