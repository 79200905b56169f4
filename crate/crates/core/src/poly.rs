//! Dense univariate polynomials over a prime field `F_p`.
//!
//! Coefficients are stored low-degree first and kept reduced into `[0, p)`.
//! The zero polynomial is the empty vector.

pub type Poly = Vec<u64>;

pub(crate) fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod_u64(a, p - 2, p)
}

pub fn trim(f: &mut Poly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

/// Degree of `f`, or `None` for the zero polynomial.
pub fn degree(f: &[u64]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn sub(f: &[u64], g: &[u64], p: u64) -> Poly {
    let len = f.len().max(g.len());
    let mut out: Poly = (0..len)
        .map(|i| {
            let a = f.get(i).copied().unwrap_or(0);
            let b = g.get(i).copied().unwrap_or(0);
            (a + p - b) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub fn mul(f: &[u64], g: &[u64], p: u64) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a * b) % p;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `f` modulo the nonzero polynomial `m`.
pub fn rem(f: &[u64], m: &[u64], p: u64) -> Poly {
    let dm = degree(m).expect("division by the zero polynomial");
    let mut r: Poly = f.to_vec();
    trim(&mut r);
    let lead_inv = inv_mod(m[dm], p);
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let factor = r[dr] * lead_inv % p;
        let shift = dr - dm;
        for (i, &c) in m.iter().enumerate().take(dm + 1) {
            r[shift + i] = (r[shift + i] + p - factor * c % p) % p;
        }
        trim(&mut r);
    }
    r
}

pub fn mul_mod(f: &[u64], g: &[u64], m: &[u64], p: u64) -> Poly {
    rem(&mul(f, g, p), m, p)
}

pub fn pow_mod(f: &[u64], mut exp: u64, m: &[u64], p: u64) -> Poly {
    let mut acc: Poly = rem(&[1], m, p);
    let mut base = rem(f, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &base, m, p);
        }
        base = mul_mod(&base, &base, m, p);
        exp >>= 1;
    }
    acc
}

pub fn gcd(f: &[u64], g: &[u64], p: u64) -> Poly {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(d) = degree(&a) {
        let inv = inv_mod(a[d], p);
        for c in a.iter_mut() {
            *c = *c * inv % p;
        }
    }
    a
}

pub fn eval(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

pub fn has_root(f: &[u64], p: u64) -> bool {
    (0..p).any(|x| eval(f, x, p) == 0)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `x^(p^k) mod m`, by `k` successive `p`-th powers.
fn frobenius_power(k: u64, m: &[u64], p: u64) -> Poly {
    let mut h = rem(&[0, 1], m, p);
    for _ in 0..k {
        h = pow_mod(&h, p, m, p);
    }
    h
}

/// Irreducibility over `F_p`.
///
/// Degrees up to 3 are decided by the absence of roots; larger degrees use
/// Rabin's criterion: `x^(p^n) = x mod f` and `gcd(x^(p^(n/r)) - x, f) = 1`
/// for every prime `r | n`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = match degree(f) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(d) => d as u64,
    };
    if n <= 3 {
        return !has_root(f, p);
    }
    let x: Poly = vec![0, 1];
    let top = frobenius_power(n, f, p);
    if !sub(&top, &rem(&x, f, p), p).is_empty() {
        return false;
    }
    prime_factors(n).into_iter().all(|r| {
        let h = frobenius_power(n / r, f, p);
        let g = gcd(f, &sub(&h, &x, p), p);
        degree(&g) == Some(0)
    })
}

/// The least monic irreducible polynomial of degree `n` over `F_p`, with
/// coefficient vectors `(c_0, ..., c_{n-1})` compared lexicographically
/// from the constant term up. Returned as `n + 1` coefficients.
pub fn least_irreducible(p: u64, n: usize) -> Option<Poly> {
    if n == 1 {
        return Some(vec![0, 1]);
    }
    let mut coeffs = vec![0u64; n + 1];
    coeffs[n] = 1;
    loop {
        if is_irreducible(&coeffs, p) {
            return Some(coeffs);
        }
        // Odometer with c_{n-1} as the fastest digit.
        let mut i = n;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Irreducibility by trial division with every monic polynomial of
    /// degree 1..=n/2.
    fn brute_irreducible(f: &[u64], p: u64) -> bool {
        let n = degree(f).unwrap();
        for d in 1..=n / 2 {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut g: Poly = (0..d).map(|i| idx / p.pow(i as u32) % p).collect();
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn least_quadratic_over_f3_is_x2_plus_1() {
        assert_eq!(least_irreducible(3, 2), Some(vec![1, 0, 1]));
    }

    #[test]
    fn rabin_matches_trial_division() {
        for &(p, n) in &[
            (3u64, 2usize),
            (3, 3),
            (3, 4),
            (5, 2),
            (5, 3),
            (3, 5),
            (7, 2),
            (5, 4),
        ] {
            let count = p.pow(n as u32);
            for idx in 0..count.min(2000) {
                let mut f: Poly = (0..n).map(|i| idx / p.pow(i as u32) % p).collect();
                f.push(1);
                assert_eq!(
                    is_irreducible(&f, p),
                    brute_irreducible(&f, p),
                    "p={p} f={f:?}"
                );
            }
        }
    }

    #[test]
    fn least_irreducible_is_least() {
        for &(p, n) in &[(3u64, 2usize), (3, 4), (5, 3), (7, 3), (3, 6)] {
            let f = least_irreducible(p, n).unwrap();
            assert!(brute_irreducible(&f, p));
            // every lexicographically smaller monic candidate is reducible
            let key = |c: &[u64]| c[..n].to_vec();
            let count = p.pow(n as u32);
            for idx in 0..count {
                let mut g: Poly = (0..n)
                    .map(|i| idx / p.pow((n - 1 - i) as u32) % p)
                    .collect();
                if key(&g) >= key(&f) {
                    break;
                }
                g.push(1);
                assert!(!brute_irreducible(&g, p), "{g:?} precedes {f:?}");
            }
        }
    }

    #[test]
    fn gcd_of_coprime_linear_factors() {
        // (x+1)(x+2) and (x+1)(x+3) over F_7 share x+1
        let a = mul(&[1, 1], &[2, 1], 7);
        let b = mul(&[1, 1], &[3, 1], 7);
        assert_eq!(gcd(&a, &b, 7), vec![1, 1]);
    }
}
