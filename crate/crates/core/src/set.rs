//! Subsets of `F_q` as bit vectors indexed by element index, plus the
//! sumset and compatibility operations built on them.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Element, Field};

/// Above this order the translates `Q - a` are recomputed on demand instead
/// of being cached for every `a`.
pub const SHIFT_CACHE_LIMIT: u32 = 1 << 13;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    q: u32,
    words: Vec<u64>,
}

fn word_count(q: u32) -> usize {
    (q as usize).div_ceil(64)
}

impl ElementSet {
    pub fn empty(q: u32) -> Self {
        ElementSet {
            q,
            words: vec![0; word_count(q)],
        }
    }

    pub fn full(q: u32) -> Self {
        let mut s = ElementSet {
            q,
            words: vec![u64::MAX; word_count(q)],
        };
        s.mask_tail();
        s
    }

    /// Builds a set from element indices, rejecting indices `>= q`.
    pub fn from_elements<I: IntoIterator<Item = u32>>(q: u32, elems: I) -> Result<Self> {
        let mut s = Self::empty(q);
        for x in elems {
            if x >= q {
                return Err(Error::IndexOutOfRange { index: x as u64, q });
            }
            s.insert(x);
        }
        Ok(s)
    }

    /// Parses the comma-separated literal form, e.g. `"1,2,4"`; the empty
    /// string is the empty set.
    pub fn parse(q: u32, text: &str) -> Result<Self> {
        let text = text.trim();
        let mut s = Self::empty(q);
        if text.is_empty() {
            return Ok(s);
        }
        for tok in text.split(',') {
            let x: u64 = tok
                .trim()
                .parse()
                .map_err(|_| Error::ParseSet(format!("bad element {tok:?} in {text:?}")))?;
            if x >= q as u64 {
                return Err(Error::IndexOutOfRange { index: x, q });
            }
            if s.contains(x as u32) {
                return Err(Error::ParseSet(format!(
                    "duplicate element {x} in {text:?}"
                )));
            }
            s.insert(x as u32);
        }
        Ok(s)
    }

    fn mask_tail(&mut self) {
        let rem = self.q as usize % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, x: Element) -> bool {
        x < self.q && self.words[x as usize / 64] >> (x % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: Element) {
        debug_assert!(x < self.q);
        self.words[x as usize / 64] |= 1 << (x % 64);
    }

    #[inline]
    pub fn remove(&mut self, x: Element) {
        debug_assert!(x < self.q);
        self.words[x as usize / 64] &= !(1 << (x % 64));
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some(wi as u32 * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<Element> {
        self.iter().collect()
    }

    pub fn max_element(&self) -> Option<Element> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i as u32 * 64 + 63 - w.leading_zeros())
    }

    pub fn ensure_same_field(&self, other: &ElementSet) -> Result<()> {
        if self.q == other.q {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.q,
                right: other.q,
            })
        }
    }

    pub fn and(&self, other: &ElementSet) -> ElementSet {
        debug_assert_eq!(self.q, other.q);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        ElementSet { q: self.q, words }
    }

    pub fn and_assign(&mut self, other: &ElementSet) {
        debug_assert_eq!(self.q, other.q);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn or_assign(&mut self, other: &ElementSet) {
        debug_assert_eq!(self.q, other.q);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn or(&self, other: &ElementSet) -> ElementSet {
        let mut out = self.clone();
        out.or_assign(other);
        out
    }

    pub fn and_not(&self, other: &ElementSet) -> ElementSet {
        debug_assert_eq!(self.q, other.q);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & !b)
            .collect();
        ElementSet { q: self.q, words }
    }

    /// `#(self ∩ other)` without allocating.
    pub fn and_count(&self, other: &ElementSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.q == other.q
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    /// Cyclic shift of the index string: bit `(i + t) mod q` of the result is
    /// bit `i` of `self`. For a prime field this is the translate `self + t`.
    pub fn rotate_up(&self, t: u32) -> ElementSet {
        let q = self.q;
        let t = t % q;
        if t == 0 {
            return self.clone();
        }
        let mut out = self.shifted_left(t);
        let wrapped = self.shifted_right(q - t);
        out.or_assign(&wrapped);
        out
    }

    /// Bit `i + s` of the result is bit `i` of `self`; bits beyond `q` drop.
    fn shifted_left(&self, s: u32) -> ElementSet {
        let n = self.words.len();
        let (ws, bs) = (s as usize / 64, s % 64);
        let mut words = vec![0u64; n];
        for i in (ws..n).rev() {
            let src = i - ws;
            let mut w = self.words[src] << bs;
            if bs != 0 && src > 0 {
                w |= self.words[src - 1] >> (64 - bs);
            }
            words[i] = w;
        }
        let mut out = ElementSet { q: self.q, words };
        out.mask_tail();
        out
    }

    /// Bit `i` of the result is bit `i + s` of `self`.
    fn shifted_right(&self, s: u32) -> ElementSet {
        let n = self.words.len();
        let (ws, bs) = (s as usize / 64, s % 64);
        let mut words = vec![0u64; n];
        for i in 0..n.saturating_sub(ws) {
            let src = i + ws;
            let mut w = self.words[src] >> bs;
            if bs != 0 && src + 1 < n {
                w |= self.words[src + 1] << (64 - bs);
            }
            words[i] = w;
        }
        ElementSet { q: self.q, words }
    }
}

impl Ord for ElementSet {
    /// Lexicographic order on the increasing element sequences.
    fn cmp(&self, other: &Self) -> Ordering {
        self.q
            .cmp(&other.q)
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for x in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}/F{}", self.q)
    }
}

/// `set + t`.
pub fn translate(field: &Field, set: &ElementSet, t: Element) -> ElementSet {
    if field.is_prime_field() {
        return set.rotate_up(t);
    }
    let mut out = ElementSet::empty(set.q());
    for x in set.iter() {
        out.insert(field.add(x, t));
    }
    out
}

/// `A + B`, translating the larger set by each element of the smaller one.
pub fn sumset(field: &Field, a: &ElementSet, b: &ElementSet) -> Result<ElementSet> {
    a.ensure_same_field(b)?;
    if a.q() != field.q() {
        return Err(Error::FieldMismatch {
            left: a.q(),
            right: field.q(),
        });
    }
    Ok(sumset_unchecked(field, a, b))
}

pub(crate) fn sumset_unchecked(field: &Field, a: &ElementSet, b: &ElementSet) -> ElementSet {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut out = ElementSet::empty(a.q());
    for x in small.iter() {
        out.or_assign(&translate(field, large, x));
    }
    out
}

/// True iff `#A >= 2`, `#B >= 2` and `A + B = Q`.
pub fn is_decomposition(field: &Field, a: &ElementSet, b: &ElementSet) -> Result<bool> {
    let sum = sumset(field, a, b)?;
    Ok(a.len() >= 2 && b.len() >= 2 && sum == field.quadratic_residues())
}

/// `B*(A)`, the largest `B` with `A + B ⊆ Q`: the intersection of the
/// translates `Q - a` over `a ∈ A`.
pub fn max_compatible_b(field: &Field, a: &ElementSet) -> Result<ElementSet> {
    if a.q() != field.q() {
        return Err(Error::FieldMismatch {
            left: a.q(),
            right: field.q(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptyA);
    }
    Ok(ResidueShifts::new(field).intersect_shifts(a))
}

/// The residue set `Q` together with its translates `Q - a`.
#[derive(Debug, Clone)]
pub struct ResidueShifts<'f> {
    field: &'f Field,
    residues: ElementSet,
    cache: Option<Vec<ElementSet>>,
}

impl<'f> ResidueShifts<'f> {
    pub fn new(field: &'f Field) -> Self {
        let residues = field.quadratic_residues();
        Self::with_limit(field, residues, SHIFT_CACHE_LIMIT)
    }

    pub fn with_limit(field: &'f Field, residues: ElementSet, limit: u32) -> Self {
        let mut shifts = ResidueShifts {
            field,
            residues,
            cache: None,
        };
        if field.q() <= limit {
            let cache = (0..field.q()).map(|a| shifts.compute(a)).collect();
            shifts.cache = Some(cache);
        }
        shifts
    }

    fn compute(&self, a: Element) -> ElementSet {
        translate(self.field, &self.residues, self.field.neg(a))
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    pub fn residues(&self) -> &ElementSet {
        &self.residues
    }

    /// `Q - a`: bit `u` is set iff `u + a ∈ Q`.
    pub fn minus(&self, a: Element) -> Cow<'_, ElementSet> {
        match &self.cache {
            Some(c) => Cow::Borrowed(&c[a as usize]),
            None => Cow::Owned(self.compute(a)),
        }
    }

    /// `∩_{a ∈ set} (Q - a)`; the full field for the empty set.
    pub fn intersect_shifts(&self, set: &ElementSet) -> ElementSet {
        let mut out = ElementSet::full(self.field.q());
        for a in set.iter() {
            out.and_assign(&self.minus(a));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn set(q: u32, xs: &[u32]) -> ElementSet {
        ElementSet::from_elements(q, xs.iter().copied()).unwrap()
    }

    #[test]
    fn literal_format() {
        let s = set(7, &[4, 1, 2]);
        assert_eq!(s.to_string(), "1,2,4");
        assert_eq!(ElementSet::parse(7, "1,2,4").unwrap(), s);
        assert_eq!(ElementSet::parse(7, "").unwrap(), ElementSet::empty(7));
        assert!(ElementSet::parse(7, "1,9").is_err());
        assert!(ElementSet::parse(7, "1,x").is_err());
        assert!(ElementSet::parse(7, "1,1").is_err());
    }

    #[test]
    fn rotation_matches_elementwise_translation() {
        for q in [3u32, 7, 61, 63, 64, 65, 127, 128, 131, 257] {
            let s =
                ElementSet::from_elements(q, (0..q).filter(|x| x % 3 == 0 || x % 7 == 1)).unwrap();
            for t in [0, 1, 2, q / 2, q - 1, 63 % q, 64 % q] {
                let expect = ElementSet::from_elements(q, s.iter().map(|x| (x + t) % q)).unwrap();
                assert_eq!(s.rotate_up(t), expect, "q={q} t={t}");
            }
        }
    }

    #[test]
    fn sumset_examples() {
        let f = build_field(7, 1).unwrap();
        let b = set(7, &[0, 3, 5]);
        assert_eq!(sumset(&f, &set(7, &[0]), &b).unwrap(), b);
        assert_eq!(
            sumset(&f, &set(7, &[1, 2]), &set(7, &[0, 3])).unwrap(),
            set(7, &[1, 2, 4, 5])
        );
        assert!(sumset(&f, &ElementSet::empty(7), &b).unwrap().is_empty());
        assert_eq!(
            sumset(&f, &set(7, &[1]), &set(5, &[1])).unwrap_err(),
            Error::FieldMismatch { left: 7, right: 5 }
        );
    }

    #[test]
    fn decomposition_examples() {
        let f7 = build_field(7, 1).unwrap();
        assert!(!is_decomposition(&f7, &set(7, &[1, 2]), &set(7, &[0, 3])).unwrap());
        assert!(!is_decomposition(&f7, &set(7, &[1]), &f7.quadratic_residues()).unwrap());
        let f5 = build_field(5, 1).unwrap();
        assert!(!is_decomposition(&f5, &set(5, &[0, 1]), &set(5, &[0, 1])).unwrap());
    }

    #[test]
    fn max_compatible_examples() {
        let f = build_field(7, 1).unwrap();
        assert_eq!(
            max_compatible_b(&f, &set(7, &[1, 2])).unwrap(),
            set(7, &[0])
        );
        assert_eq!(
            max_compatible_b(&f, &set(7, &[0])).unwrap(),
            f.quadratic_residues()
        );
        assert_eq!(
            max_compatible_b(&f, &ElementSet::empty(7)).unwrap_err(),
            Error::EmptyA
        );
    }

    #[test]
    fn extension_field_shift() {
        let f = build_field(3, 2).unwrap();
        let shifts = ResidueShifts::new(&f);
        let q = f.quadratic_residues();
        for a in 0..9 {
            for u in 0..9 {
                assert_eq!(shifts.minus(a).contains(u), q.contains(f.add(u, a)));
            }
        }
    }

    #[test]
    fn uncached_shifts_agree() {
        let f = build_field(101, 1).unwrap();
        let cached = ResidueShifts::new(&f);
        let lazy = ResidueShifts::with_limit(&f, f.quadratic_residues(), 0);
        for a in 0..101 {
            assert_eq!(cached.minus(a), lazy.minus(a));
        }
    }

    #[test]
    fn max_element_and_ordering() {
        assert_eq!(set(200, &[3, 130]).max_element(), Some(130));
        assert_eq!(ElementSet::empty(9).max_element(), None);
        assert!(set(9, &[0, 5]) < set(9, &[1]));
        assert!(set(9, &[1]) < set(9, &[1, 2]));
    }
}
