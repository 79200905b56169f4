//! Odd-characteristic finite fields `F_q`, `q = p^n <= 2^20`.
//!
//! Elements are canonical indices in `[0, q)`: the coefficient vector
//! `(c_0, ..., c_{n-1})` of the residue polynomial is packed base `p`,
//! little-endian, so prime-field indices are the integer residues
//! themselves. Index 0 is zero and index 1 is one.
//!
//! Multiplication goes through discrete log/exp tables over a primitive
//! element; the quadratic character is the parity of the discrete log and
//! is tabulated once at construction.

use crate::error::{Error, Result};
use crate::poly::{self, Poly};
use crate::set::ElementSet;

/// Canonical element index.
pub type Element = u32;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

/// `chi(x)` for every element index; `values()[0] == 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable(Vec<i8>);

impl CharacterTable {
    pub fn values(&self) -> &[i8] {
        &self.0
    }
}

#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    radix: Vec<u32>,
    generator: Element,
    exp: Vec<Element>,
    log: Vec<u32>,
    chi: CharacterTable,
}

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `q` as `p^n` with `p` an odd prime.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 3 || q % 2 == 0 {
        return None;
    }
    let mut p = 3;
    while p * p <= q && q % p != 0 {
        p += 2;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut n = 0;
    while rest % p == 0 {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p as u32, n))
}

/// Builds `F_{p^n}`; for `n > 1` the modulus is the lexicographically least
/// monic irreducible of degree `n`.
pub fn build_field(p: u64, n: u32) -> Result<Field> {
    Field::new(p, n)
}

fn distinct_prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

impl Field {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        let (p, n, q) = Self::check_order(p, n)?;
        let modulus: Vec<u32> = if n == 1 {
            vec![0, 1]
        } else {
            poly::least_irreducible(p as u64, n as usize)
                .expect("a monic irreducible of every degree exists over F_p")
                .into_iter()
                .map(|c| c as u32)
                .collect()
        };
        let mut field = Self::skeleton(p, n, q, modulus);
        let generator = field.find_generator();
        field.install_tables(generator);
        Ok(field)
    }

    /// Builds `F_q` from its order.
    pub fn from_order(q: u64) -> Result<Self> {
        let (p, n) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p as u64, n)
    }

    /// Rebuilds a field from previously computed modulus and primitive
    /// element, checking both.
    pub fn from_precomputed(p: u64, n: u32, modulus: &[u32], generator: Element) -> Result<Self> {
        let (p, n, q) = Self::check_order(p, n)?;
        if n > 1 {
            let f: Poly = modulus.iter().map(|&c| c as u64).collect();
            if modulus.len() != n as usize + 1
                || modulus[n as usize] != 1
                || modulus.iter().any(|&c| c >= p)
                || !poly::is_irreducible(&f, p as u64)
            {
                return Err(Error::Domain(
                    "cached modulus is not a monic irreducible".into(),
                ));
            }
        } else if modulus != [0, 1] {
            return Err(Error::Domain(
                "prime-field placeholder modulus must be x".into(),
            ));
        }
        let mut field = Self::skeleton(p, n, q, modulus.to_vec());
        if generator == 0 || generator >= q || !field.is_primitive(generator) {
            return Err(Error::Domain(format!(
                "{generator} is not a primitive element"
            )));
        }
        field.install_tables(generator);
        Ok(field)
    }

    fn check_order(p: u64, n: u32) -> Result<(u32, u32, u32)> {
        if !is_odd_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if n == 0 {
            return Err(Error::Domain("extension degree must be at least 1".into()));
        }
        let q = p
            .checked_pow(n)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::FieldTooLarge(p.saturating_pow(n)))?;
        Ok((p as u32, n, q as u32))
    }

    fn skeleton(p: u32, n: u32, q: u32, modulus: Vec<u32>) -> Self {
        let radix = (0..n).map(|i| p.pow(i)).collect();
        Field {
            p,
            n,
            q,
            modulus,
            radix,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
            chi: CharacterTable(Vec::new()),
        }
    }

    fn is_primitive(&self, g: Element) -> bool {
        let order = (self.q - 1) as u64;
        distinct_prime_factors(order)
            .into_iter()
            .all(|r| self.pow_by_polynomials(g, order / r) != 1)
    }

    fn find_generator(&self) -> Element {
        (1..self.q)
            .find(|&g| self.is_primitive(g))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    fn install_tables(&mut self, generator: Element) {
        let order = (self.q - 1) as usize;
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![u32::MAX; self.q as usize];
        let mut cur: Element = 1;
        for i in 0..order {
            exp.push(cur);
            log[cur as usize] = i as u32;
            cur = self.mul_by_polynomials(cur, generator);
        }
        assert_eq!(cur, 1, "generator order must be q - 1");
        let chi = log
            .iter()
            .map(|&l| match l {
                u32::MAX => 0,
                l if l % 2 == 0 => 1,
                _ => -1,
            })
            .collect();
        self.generator = generator;
        self.exp = exp;
        self.log = log;
        self.chi = CharacterTable(chi);
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.n == 1
    }

    /// Modulus coefficients, low degree first (`[0, 1]` placeholder when `n = 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Element {
        self.generator
    }

    pub fn character_table(&self) -> &CharacterTable {
        &self.chi
    }

    pub fn check(&self, x: u64) -> Result<Element> {
        if x < self.q as u64 {
            Ok(x as Element)
        } else {
            Err(Error::IndexOutOfRange {
                index: x,
                q: self.q,
            })
        }
    }

    pub fn coeffs(&self, x: Element) -> Vec<u32> {
        self.radix.iter().map(|&r| x / r % self.p).collect()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Element {
        c.iter()
            .zip(&self.radix)
            .map(|(&ci, &r)| (ci % self.p) * r)
            .sum()
    }

    pub fn add(&self, a: Element, b: Element) -> Element {
        if self.n == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for &r in &self.radix {
            out += ((a % self.p + b % self.p) % self.p) * r;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn neg(&self, a: Element) -> Element {
        if self.n == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let mut out = 0;
        for &r in &self.radix {
            out += ((self.p - a % self.p) % self.p) * r;
            a /= self.p;
        }
        out
    }

    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Element, b: Element) -> Element {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q - 1;
        let s = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % order as u64;
        self.exp[s as usize]
    }

    pub fn inv(&self, a: Element) -> Option<Element> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize];
        Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    pub fn pow(&self, a: Element, e: u64) -> Element {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        self.exp[(self.log[a as usize] as u64 * (e % order) % order) as usize]
    }

    /// Discrete logarithm to the base [`Field::generator`].
    pub fn log(&self, a: Element) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Multiplication by polynomial arithmetic modulo the modulus, without
    /// the log tables.
    pub fn mul_by_polynomials(&self, a: Element, b: Element) -> Element {
        if self.n == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as Element;
        }
        let p = self.p as u64;
        let fa: Poly = self.coeffs(a).into_iter().map(u64::from).collect();
        let fb: Poly = self.coeffs(b).into_iter().map(u64::from).collect();
        let m: Poly = self.modulus.iter().map(|&c| c as u64).collect();
        let r = poly::mul_mod(&fa, &fb, &m, p);
        let c: Vec<u32> = r.into_iter().map(|c| c as u32).collect();
        self.from_coeffs(&c)
    }

    /// Square-and-multiply exponentiation through [`Field::mul_by_polynomials`].
    pub fn pow_by_polynomials(&self, a: Element, mut e: u64) -> Element {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_by_polynomials(acc, base);
            }
            base = self.mul_by_polynomials(base, base);
            e >>= 1;
        }
        acc
    }

    /// Euler's criterion `x^((q-1)/2)`, evaluated without the tables.
    pub fn character_by_power(&self, x: Element) -> i8 {
        if x == 0 {
            return 0;
        }
        match self.pow_by_polynomials(x, ((self.q - 1) / 2) as u64) {
            1 => 1,
            _ => -1,
        }
    }

    /// Table lookup of the quadratic character; panics on out-of-range input.
    #[inline]
    pub fn chi(&self, x: Element) -> i8 {
        self.chi.0[x as usize]
    }

    pub fn quadratic_character(&self, x: u64) -> Result<i8> {
        let x = self.check(x)?;
        Ok(self.chi(x))
    }

    /// `Q = { x*x : x != 0 }`.
    pub fn quadratic_residues(&self) -> ElementSet {
        let mut out = ElementSet::empty(self.q);
        for x in 1..self.q {
            out.insert(self.mul(x, x));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic_is_mod_p() {
        let f = build_field(7, 1).unwrap();
        assert_eq!(f.q(), 7);
        for a in 0..7 {
            for b in 0..7 {
                assert_eq!(f.add(a, b), (a + b) % 7);
                assert_eq!(f.mul(a, b), (a * b) % 7);
                assert_eq!(f.sub(a, b), (a + 7 - b) % 7);
            }
        }
    }

    #[test]
    fn f9_uses_x2_plus_1() {
        let f = build_field(3, 2).unwrap();
        assert_eq!(f.q(), 9);
        assert_eq!(f.modulus(), &[1, 0, 1]);
        // x * x = -1 = 2
        assert_eq!(f.mul(3, 3), 2);
    }

    #[test]
    fn rejects_even_and_composite_characteristic() {
        assert_eq!(build_field(2, 1).unwrap_err(), Error::NotOddPrime(2));
        assert_eq!(build_field(9, 1).unwrap_err(), Error::NotOddPrime(9));
        assert!(matches!(build_field(3, 13), Err(Error::FieldTooLarge(_))));
        assert!(matches!(build_field(3, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn character_examples_mod_7() {
        let f = build_field(7, 1).unwrap();
        assert_eq!(f.quadratic_character(1).unwrap(), 1);
        assert_eq!(f.quadratic_character(0).unwrap(), 0);
        assert_eq!(f.quadratic_character(3).unwrap(), -1);
        assert!(matches!(
            f.quadratic_character(7),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn residues_small_fields() {
        let f7 = build_field(7, 1).unwrap();
        assert_eq!(f7.quadratic_residues().to_vec(), vec![1, 2, 4]);
        let f3 = build_field(3, 1).unwrap();
        assert_eq!(f3.quadratic_residues().to_vec(), vec![1]);
        let f9 = build_field(3, 2).unwrap();
        assert_eq!(f9.quadratic_residues().len(), 4);
    }

    #[test]
    fn table_character_matches_euler_criterion() {
        for q in [3u64, 5, 9, 25, 27, 49, 81, 121, 125, 243] {
            let f = Field::from_order(q).unwrap();
            for x in 0..f.q() {
                assert_eq!(f.chi(x), f.character_by_power(x), "q={q} x={x}");
            }
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(343), Some((7, 3)));
        assert_eq!(prime_power(1009), Some((1009, 1)));
        assert_eq!(prime_power(15), None);
        assert_eq!(prime_power(8), None);
    }

    #[test]
    fn precomputed_round_trip() {
        let f = Field::from_order(81).unwrap();
        let g = Field::from_precomputed(3, 4, f.modulus(), f.generator()).unwrap();
        assert_eq!(g.character_table(), f.character_table());
        assert!(Field::from_precomputed(3, 4, f.modulus(), 1).is_err());
    }
}
