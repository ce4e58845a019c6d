//! Finite fields `F_{p^s}` with an explicit modulus polynomial.
//!
//! Elements are canonical integers in `[0, q)`: the base-`p` digits of the
//! integer are the coefficients of the residue polynomial, lowest degree
//! first. This packing makes element encodings bit-exact across machines
//! and keeps matrices as flat `Vec<u64>` buffers.

use std::fmt;
use std::sync::Arc;

use super::{digits_of, AlgebraError};

/// Fields with at most this many elements get exp/log tables for
/// multiplication and inversion.
const TABLE_LIMIT: u64 = 1 << 16;

/// A finite field `F_{p^s}`, immutable after construction.
pub struct Field {
    p: u64,
    s: u32,
    q: u64,
    /// Monic irreducible modulus over `F_p`, `s + 1` coefficients, lowest
    /// degree first. For prime fields this is the polynomial `x`.
    modulus: Vec<u64>,
    /// Discrete exp/log tables relative to `generator`, present when
    /// `q <= TABLE_LIMIT`. `exp[i] = g^i` for `i < q - 1`, `log[exp[i]] = i`.
    exp: Vec<u64>,
    log: Vec<u64>,
    generator: u64,
}

/// Shared handle to a field. Cheap to clone; containers store one of these
/// rather than tagging every element.
pub type FieldRef = Arc<Field>;

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)?;
        if self.s > 1 {
            write!(f, " (p={}, s={})", self.p, self.s)?;
        }
        Ok(())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.s == other.s && self.modulus == other.modulus
    }
}
impl Eq for Field {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

impl Field {
    /// Builds `F_{p^s}`. When `modulus` is `None`, the deterministic search
    /// picks the irreducible monic polynomial of degree `s` whose non-leading
    /// coefficients pack to the smallest integer in base `p`, so a field
    /// constructed twice (or on two machines) is identical.
    pub fn new(p: u64, s: u32, modulus: Option<Vec<u64>>) -> Result<FieldRef, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NonPrimeCharacteristic(p));
        }
        if s == 0 {
            return Err(AlgebraError::NonPrimeCharacteristic(p));
        }
        let q = p
            .checked_pow(s)
            .filter(|&q| q <= (1 << 48))
            .ok_or(AlgebraError::FieldTooLarge { p, s })?;

        let modulus = match modulus {
            Some(m) => {
                if m.len() != s as usize + 1 || m[s as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(AlgebraError::ReducibleModulus);
                }
                if s > 1 && !is_irreducible_over_prime(p, &m) {
                    return Err(AlgebraError::ReducibleModulus);
                }
                m
            }
            None => smallest_irreducible(p, s),
        };

        let mut field = Field {
            p,
            s,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            generator: 0,
        };
        if q <= TABLE_LIMIT {
            field.build_tables();
        }
        Ok(Arc::new(field))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Field order `q = p^s`.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// A fixed multiplicative generator (the smallest one in canonical order).
    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Wire width in bytes of one element: `ceil(bits(q-1) / 8)`.
    pub fn element_width(&self) -> usize {
        let bits = 64 - (self.q - 1).leading_zeros() as usize;
        bits.max(1).div_ceil(8)
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.q
    }

    /// Embeds an integer as `v mod p` (a constant of the prime subfield).
    pub fn from_int(&self, v: u64) -> u64 {
        v % self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if self.p == 2 {
            return a ^ b;
        }
        if self.s == 1 {
            return (a + b) % self.p;
        }
        let mut out = 0u64;
        let mut mult = 1u64;
        let (mut a, mut b) = (a, b);
        for _ in 0..self.s {
            out += ((a % self.p + b % self.p) % self.p) * mult;
            a /= self.p;
            b /= self.p;
            mult *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.q);
        if self.p == 2 {
            return a;
        }
        if self.s == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut out = 0u64;
        let mut mult = 1u64;
        let mut a = a;
        for _ in 0..self.s {
            let d = a % self.p;
            out += if d == 0 { 0 } else { self.p - d } * mult;
            a /= self.p;
            mult *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        if self.s == 1 {
            return ((a as u128 * b as u128) % self.p as u128) as u64;
        }
        if !self.exp.is_empty() {
            let idx = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
            return self.exp[idx as usize];
        }
        self.mul_poly(a, b)
    }

    /// Multiplication by residue-polynomial arithmetic; the table-free path.
    fn mul_poly(&self, a: u64, b: u64) -> u64 {
        let da = digits_of(a, self.p, self.s as usize);
        let db = digits_of(b, self.p, self.s as usize);
        let mut prod = vec![0u64; 2 * self.s as usize];
        for (i, &ai) in da.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % self.p;
            }
        }
        // Reduce modulo the monic modulus of degree s.
        let s = self.s as usize;
        for deg in (s..2 * s).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &mi) in self.modulus.iter().enumerate().take(s) {
                let pos = deg - s + i;
                prod[pos] = (prod[pos] + c * (self.p - mi) % self.p) % self.p;
            }
        }
        let mut out = 0u64;
        for i in (0..s).rev() {
            out = out * self.p + prod[i];
        }
        out
    }

    pub fn inv(&self, a: u64) -> Result<u64, AlgebraError> {
        if a == 0 {
            return Err(AlgebraError::ZeroInverse);
        }
        debug_assert!(a < self.q);
        if !self.exp.is_empty() {
            let idx = (self.q - 1 - self.log[a as usize]) % (self.q - 1);
            return Ok(self.exp[idx as usize]);
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64, AlgebraError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if !self.exp.is_empty() {
            let idx = (self.log[a as usize] as u128 * e as u128) % (self.q - 1) as u128;
            return self.exp[idx as usize];
        }
        let mut base = a;
        let mut e = e;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u64) -> u64 {
        assert!(a != 0);
        let mut ord = self.q - 1;
        for r in prime_factors(self.q - 1) {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == 1 {
                ord /= r;
            }
        }
        ord
    }

    fn build_tables(&mut self) {
        let group = self.q - 1;
        let factors = prime_factors(group);
        let mut gen = 0u64;
        for cand in 1..self.q {
            let ok = factors.iter().all(|&r| {
                let mut acc = 1u64;
                let mut base = cand;
                let mut e = group / r;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = if self.s == 1 {
                            (acc as u128 * base as u128 % self.p as u128) as u64
                        } else {
                            self.mul_poly(acc, base)
                        };
                    }
                    base = if self.s == 1 {
                        (base as u128 * base as u128 % self.p as u128) as u64
                    } else {
                        self.mul_poly(base, base)
                    };
                    e >>= 1;
                }
                acc != 1
            });
            if ok {
                gen = cand;
                break;
            }
        }
        assert!(gen != 0, "multiplicative group must have a generator");
        let mut exp = vec![0u64; group as usize];
        let mut log = vec![0u64; self.q as usize];
        let mut acc = 1u64;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = acc;
            log[acc as usize] = i as u64;
            acc = if self.s == 1 {
                (acc as u128 * gen as u128 % self.p as u128) as u64
            } else {
                self.mul_poly(acc, gen)
            };
        }
        debug_assert_eq!(acc, 1);
        self.exp = exp;
        self.log = log;
        self.generator = gen;
    }
}

/// Irreducibility of a monic polynomial over the prime field `F_p`,
/// coefficients lowest degree first. A reducible polynomial of degree `n`
/// has an irreducible factor of degree `i <= n/2`, and every irreducible
/// of degree `i` divides `x^{p^i} - x`, so it suffices to check
/// `gcd(x^{p^i} - x mod f, f) = 1` for `i = 1..=n/2`.
fn is_irreducible_over_prime(p: u64, coeffs: &[u64]) -> bool {
    let n = coeffs.len() - 1;
    debug_assert!(coeffs[n] == 1);
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let mut frob = vec![0u64, 1]; // the polynomial x
    for _ in 1..=n / 2 {
        frob = prime_poly_pow_mod(p, &frob, p, coeffs);
        // frob now holds x^{p^i} mod f; subtract x and take a gcd with f.
        let mut diff = frob.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        while diff.last() == Some(&0) {
            diff.pop();
        }
        let g = prime_poly_gcd(p, &diff, coeffs);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u64, s: u32) -> Vec<u64> {
    if s == 1 {
        return vec![0, 1]; // x
    }
    let lower = p.pow(s);
    for packed in 0..lower {
        let mut coeffs = digits_of(packed, p, s as usize);
        coeffs.push(1);
        if is_irreducible_over_prime(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}

// Minimal polynomial arithmetic over F_p used before any Field exists
// (bootstrapping modulus validation and the deterministic search).

fn prime_poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let c = *r.last().unwrap();
        let deg = r.len() - 1;
        r.pop();
        if c == 0 {
            continue;
        }
        let lead_inv = prime_inv(p, m[dm]);
        let factor = c * lead_inv % p;
        for (i, &mi) in m.iter().enumerate().take(dm) {
            let pos = deg - dm + i;
            r[pos] = (r[pos] + (p - factor * mi % p)) % p;
        }
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn prime_inv(p: u64, a: u64) -> u64 {
    // Fermat; p is prime and a nonzero.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn prime_poly_mul_mod(p: u64, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    prime_poly_rem(p, &prod, m)
}

fn prime_poly_pow_mod(p: u64, base: &[u64], e: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = prime_poly_rem(p, base, m);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = prime_poly_mul_mod(p, &acc, &base, m);
        }
        base = prime_poly_mul_mod(p, &base, &base, m);
        e >>= 1;
    }
    acc
}

fn prime_poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while !b.is_empty() {
        let r = prime_poly_rem(p, &a, &b);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        if lead != 1 {
            let inv = prime_inv(p, lead);
            for c in &mut a {
                *c = *c * inv % p;
            }
        }
    }
    a
}

/// A field element paired with its owning field; the checked, typed surface
/// over the raw `u64` representation the containers use internally.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: FieldRef,
    repr: u64,
}

impl FieldElement {
    pub fn new(field: FieldRef, repr: u64) -> Result<Self, AlgebraError> {
        if repr >= field.q() {
            return Err(AlgebraError::FieldMismatch);
        }
        Ok(FieldElement { field, repr })
    }

    pub fn repr(&self) -> u64 {
        self.repr
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if *self.field != *other.field {
            return Err(AlgebraError::FieldMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(Self {
            field: self.field.clone(),
            repr: self.field.add(self.repr, other.repr),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(Self {
            field: self.field.clone(),
            repr: self.field.sub(self.repr, other.repr),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(Self {
            field: self.field.clone(),
            repr: self.field.mul(self.repr, other.repr),
        })
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        Ok(Self {
            field: self.field.clone(),
            repr: self.field.inv(self.repr)?,
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field.clone(),
            repr: self.field.neg(self.repr),
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        Self {
            field: self.field.clone(),
            repr: self.field.pow(self.repr, e),
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.repr == other.repr
    }
}
impl Eq for FieldElement {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_defaults_to_modulus_x() {
        let f2 = Field::new(2, 1, None).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        assert_eq!(f2.q(), 2);
        assert_eq!(f2.add(1, 1), 0);
    }

    #[test]
    fn f4_accepts_the_unique_irreducible() {
        let f4 = Field::new(2, 2, Some(vec![1, 1, 1])).unwrap();
        // x * x = x + 1 after reduction by x^2 + x + 1.
        assert_eq!(f4.mul(2, 2), 3);
    }

    #[test]
    fn f4_rejects_reducible_modulus() {
        // x^2 + 1 = (x+1)^2 over F_2.
        let err = Field::new(2, 2, Some(vec![1, 0, 1])).unwrap_err();
        assert!(matches!(err, AlgebraError::ReducibleModulus));
    }

    #[test]
    fn rejects_non_prime_characteristic() {
        assert!(matches!(
            Field::new(6, 1, None).unwrap_err(),
            AlgebraError::NonPrimeCharacteristic(6)
        ));
    }

    #[test]
    fn f5_inverse() {
        let f5 = Field::new(5, 1, None).unwrap();
        assert_eq!(f5.inv(3).unwrap(), 2);
        assert!(matches!(f5.inv(0), Err(AlgebraError::ZeroInverse)));
    }

    #[test]
    fn auto_modulus_is_deterministic_and_smallest() {
        let f8 = Field::new(2, 3, None).unwrap();
        // x^3 + x + 1 packs lower than x^3 + x^2 + 1.
        assert_eq!(f8.modulus(), &[1, 1, 0, 1]);
        let again = Field::new(2, 3, None).unwrap();
        assert_eq!(f8.modulus(), again.modulus());
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, s) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2), (2, 4), (13, 1)] {
            let f = Field::new(p, s, None).unwrap();
            let q = f.q();
            assert!(q <= 16 || s == 1);
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c)),
                            "distributivity in F_{q}"
                        );
                    }
                }
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for (p, s) in [(2u64, 2u32), (2, 3), (2, 4), (3, 2)] {
            let f = Field::new(p, s, None).unwrap();
            for a in 0..f.q() {
                for b in 0..f.q() {
                    assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
                }
            }
        }
    }

    #[test]
    fn generator_has_full_order() {
        for (p, s) in [(2u64, 4u32), (5, 1), (3, 3), (11, 1)] {
            let f = Field::new(p, s, None).unwrap();
            assert_eq!(f.order(f.generator()), f.q() - 1);
        }
    }

    #[test]
    fn table_free_path_matches_tables() {
        let f = Field::new(2, 8, None).unwrap();
        for a in (0..256).step_by(7) {
            for b in (0..256).step_by(11) {
                assert_eq!(f.mul(a, b), f.mul_poly(a, b));
            }
        }
    }

    #[test]
    fn typed_elements_check_field_ownership() {
        let f2 = Field::new(2, 1, None).unwrap();
        let f3 = Field::new(3, 1, None).unwrap();
        let a = FieldElement::new(f2, 1).unwrap();
        let b = FieldElement::new(f3, 1).unwrap();
        assert!(matches!(a.try_add(&b), Err(AlgebraError::FieldMismatch)));
    }
}
