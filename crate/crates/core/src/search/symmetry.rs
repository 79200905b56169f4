//! Scaling by nonzero squares. Since `cQ = Q` whenever `χ(c) = 1`, the map
//! `(A, B) -> (cA, cB)` permutes decompositions.

use crate::error::{Error, Result};
use crate::field::{Element, Field};
use crate::set::ElementSet;

pub(crate) fn scale_set(field: &Field, set: &ElementSet, c: Element) -> ElementSet {
    let mut out = ElementSet::empty(set.q());
    for x in set.iter() {
        out.insert(field.mul(c, x));
    }
    out
}

pub(crate) fn scale_pair(
    field: &Field,
    a: &ElementSet,
    b: &ElementSet,
    c: Element,
) -> (ElementSet, ElementSet) {
    (scale_set(field, a, c), scale_set(field, b, c))
}

/// `(cA, cB)` for a nonzero square `c`.
pub fn scaling_orbit(
    field: &Field,
    a: &ElementSet,
    b: &ElementSet,
    c: Element,
) -> Result<(ElementSet, ElementSet)> {
    a.ensure_same_field(b)?;
    if field.quadratic_character(c as u64)? != 1 {
        return Err(Error::NotAResidue(c));
    }
    Ok(scale_pair(field, a, b, c))
}

/// The distinct images `cA`, `c ∈ Q`, in increasing order.
pub fn scaling_images(field: &Field, a: &ElementSet) -> Vec<ElementSet> {
    let mut out: Vec<ElementSet> = (1..field.q())
        .filter(|&c| field.chi(c) == 1)
        .map(|c| scale_set(field, a, c))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// True iff `A` is the least member of its scaling orbit.
pub fn is_canonical(field: &Field, a: &ElementSet) -> bool {
    (1..field.q())
        .filter(|&c| field.chi(c) == 1)
        .all(|c| scale_set(field, a, c) >= *a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn set(q: u32, xs: &[u32]) -> ElementSet {
        ElementSet::from_elements(q, xs.iter().copied()).unwrap()
    }

    #[test]
    fn scaling_examples() {
        let f = build_field(7, 1).unwrap();
        let (a, b) = (set(7, &[1, 2]), set(7, &[0, 3]));
        assert_eq!(
            scaling_orbit(&f, &a, &b, 1).unwrap(),
            (a.clone(), b.clone())
        );
        assert_eq!(
            scaling_orbit(&f, &a, &b, 2).unwrap(),
            (set(7, &[2, 4]), set(7, &[0, 6]))
        );
        assert_eq!(
            scaling_orbit(&f, &a, &b, 3).unwrap_err(),
            Error::NotAResidue(3)
        );
        assert_eq!(
            scaling_orbit(&f, &a, &b, 0).unwrap_err(),
            Error::NotAResidue(0)
        );
    }

    #[test]
    fn orbit_has_one_canonical_member() {
        let f = build_field(13, 1).unwrap();
        let a = set(13, &[2, 5, 11]);
        let images = scaling_images(&f, &a);
        let canon: Vec<_> = images.iter().filter(|s| is_canonical(&f, s)).collect();
        assert_eq!(canon, vec![&images[0]]);
    }
}
