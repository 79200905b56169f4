//! Size windows and binomial counting bounds for decompositions.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::is_odd_prime;

/// `(√p / (3 ln p), √p ln p)`: the range that `#A` and `#B` of any
/// decomposition modulo the prime `p` must lie in.
pub fn sarkozy_window(p: u64) -> Result<(f64, f64)> {
    if !is_odd_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let p = p as f64;
    let (root, log) = (p.sqrt(), p.ln());
    Ok((root / (3.0 * log), root * log))
}

/// `C(⌊z⌋, n)`, zero when `n > ⌊z⌋`. Negative or NaN `z` count as 0.
pub fn binom_floor(z: f64, n: u64) -> BigUint {
    let top = if z.is_nan() || z <= 0.0 {
        0
    } else {
        z.floor() as u64
    };
    binomial(top, n)
}

pub fn binomial(top: u64, n: u64) -> BigUint {
    if n > top {
        return BigUint::zero();
    }
    let n = n.min(top - n);
    let mut acc = BigUint::one();
    for i in 0..n {
        acc *= top - i;
        acc /= i + 1;
    }
    acc
}

/// A bound value, exact while it fits in 64 bits and `log10` beyond.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scale", content = "value", rename_all = "lowercase")]
pub enum BoundValue {
    Linear(u64),
    Log10(f64),
}

impl BoundValue {
    pub fn from_big(v: &BigUint) -> Self {
        match v.to_u64() {
            Some(x) => BoundValue::Linear(x),
            None => BoundValue::Log10(log10_big(v)),
        }
    }

    /// True iff `count <= self`.
    pub fn dominates(&self, count: u64) -> bool {
        match *self {
            BoundValue::Linear(x) => count <= x,
            // anything beyond 2^64 exceeds every u64
            BoundValue::Log10(_) => true,
        }
    }
}

fn log10_big(v: &BigUint) -> f64 {
    let digits = v.to_str_radix(10);
    let lead: f64 = digits[..digits.len().min(17)].parse().unwrap_or(1.0);
    lead.log10() + (digits.len() - digits.len().min(17)) as f64
}

/// `C(⌊c√q⌋, k) · C(⌊c√q⌋, m)`.
pub fn nkmq_bound_report(q: u64, k: u64, m: u64, c: f64) -> BoundValue {
    let z = c * (q as f64).sqrt();
    BoundValue::from_big(&(binom_floor(z, k) * binom_floor(z, m)))
}

/// The least `c` for which `C(⌊c√q⌋, k) C(⌊c√q⌋, m) >= N(k, m, q)` holds for
/// every recorded `(k, m)`. Only `⌊c√q⌋` matters, so the answer is
/// `z / √q` for the least admissible integer `z`.
pub fn empirical_nkmq_constant(q: u64, counts: &BTreeMap<(usize, usize), u64>) -> f64 {
    let ok = |z: u64| {
        counts.iter().all(|(&(k, m), &n)| {
            let bound = binomial(z, k as u64) * binomial(z, m as u64);
            bound >= BigUint::from(n)
        })
    };
    let z = (0..)
        .find(|&z| ok(z))
        .expect("C(z,k)C(z,m) grows without bound");
    z as f64 / (q as f64).sqrt()
}
