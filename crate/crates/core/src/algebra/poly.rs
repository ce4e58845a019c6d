//! Univariate polynomials over a finite field, in canonical form: no
//! trailing zero coefficients, and the zero polynomial has an empty
//! coefficient list (so `degree()` is `None` rather than a sentinel).

use std::fmt;

use super::field::FieldRef;
use super::AlgebraError;

#[derive(Clone)]
pub struct Poly {
    field: FieldRef,
    /// Coefficients, lowest degree first.
    coeffs: Vec<u64>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "x")?,
                1 => write!(f, "{c}*x")?,
                _ if c == 1 => write!(f, "x^{i}")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.coeffs == other.coeffs
    }
}
impl Eq for Poly {}

impl Poly {
    pub fn new(field: FieldRef, mut coeffs: Vec<u64>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < field.q()));
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: FieldRef) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: FieldRef) -> Self {
        Poly { field, coeffs: vec![1] }
    }

    pub fn x(field: FieldRef) -> Self {
        Poly { field, coeffs: vec![0, 1] }
    }

    /// `c * x^deg`.
    pub fn monomial(field: FieldRef, c: u64, deg: usize) -> Self {
        if c == 0 {
            return Self::zero(field);
        }
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        Poly { field, coeffs }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Poly::new(self.field.clone(), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.sub(self.coeff(i), other.coeff(i)))
            .collect();
        Poly::new(self.field.clone(), coeffs)
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = &self.field;
        Poly::new(
            self.field.clone(),
            self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field.clone());
        }
        let f = &self.field;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(self.field.clone(), out)
    }

    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), AlgebraError> {
        if divisor.is_zero() {
            return Err(AlgebraError::DivisionByZeroPolynomial);
        }
        let f = self.field.clone();
        let dd = divisor.degree().unwrap();
        let lead_inv = self.field.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let deg = rem.len() - 1;
            let c = *rem.last().unwrap();
            rem.pop();
            if c == 0 {
                continue;
            }
            let factor = self.field.mul(c, lead_inv);
            quot[deg - dd] = factor;
            for (i, &di) in divisor.coeffs.iter().enumerate().take(dd) {
                let pos = deg - dd + i;
                let t = self.field.mul(factor, di);
                rem[pos] = self.field.sub(rem[pos], t);
            }
        }
        Ok((Poly::new(f.clone(), quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        Ok(self.div_rem(divisor)?.1)
    }

    pub fn divides(&self, other: &Self) -> bool {
        match other.rem(self) {
            Ok(r) => r.is_zero(),
            Err(_) => false,
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn make_monic(&self) -> Self {
        match self.leading() {
            0 | 1 => self.clone(),
            lead => {
                let inv = self.field.inv(lead).expect("nonzero leading coefficient");
                self.scale(inv)
            }
        }
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = &self.field;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Result<Self, AlgebraError> {
        self.mul(other).rem(modulus)
    }

    pub fn pow_mod(&self, e: u64, modulus: &Self) -> Result<Self, AlgebraError> {
        if modulus.is_zero() {
            return Err(AlgebraError::DivisionByZeroPolynomial);
        }
        let mut acc = Poly::one(self.field.clone()).rem(modulus)?;
        let mut base = self.rem(modulus)?;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus)?;
            }
            base = base.mul_mod(&base, modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Irreducibility over the coefficient field `F_q`: reducible `f` of
    /// degree `n` has an irreducible factor of degree `i <= n/2`, and every
    /// such factor divides `x^{q^i} - x`, so `f` is irreducible exactly when
    /// `gcd(x^{q^i} - x mod f, f) = 1` for all `i <= n/2`.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let q = self.field.q();
        let me = self.make_monic();
        let mut frob = Poly::x(self.field.clone());
        for _ in 1..=n / 2 {
            frob = frob.pow_mod(q, &me).expect("nonzero modulus");
            let diff = frob.sub(&Poly::x(self.field.clone()));
            let g = Poly::gcd(&diff, &me);
            if g.degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// `x^n - 1` over the given field.
    pub fn x_pow_minus_one(field: FieldRef, n: usize) -> Self {
        let mut coeffs = vec![0u64; n + 1];
        coeffs[0] = field.neg(1);
        coeffs[n] = 1;
        Poly::new(field, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::super::field::Field;
    use super::*;

    #[test]
    fn square_over_f2() {
        let f2 = Field::new(2, 1, None).unwrap();
        let xp1 = Poly::new(f2.clone(), vec![1, 1]);
        let sq = xp1.mul(&xp1);
        assert_eq!(sq, Poly::new(f2, vec![1, 0, 1]));
    }

    #[test]
    fn irreducibility_over_f2() {
        let f2 = Field::new(2, 1, None).unwrap();
        assert!(Poly::new(f2.clone(), vec![1, 1, 1]).is_irreducible());
        assert!(!Poly::new(f2.clone(), vec![1, 0, 1]).is_irreducible());
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2: caught by the repeated-factor gcd.
        assert!(!Poly::new(f2, vec![1, 0, 1, 0, 1]).is_irreducible());
    }

    #[test]
    fn eval_over_f3() {
        let f3 = Field::new(3, 1, None).unwrap();
        let p = Poly::new(f3, vec![1, 0, 1]); // x^2 + 1
        assert_eq!(p.eval(2), 2);
    }

    #[test]
    fn div_rem_roundtrip() {
        let f5 = Field::new(5, 1, None).unwrap();
        let a = Poly::new(f5.clone(), vec![1, 2, 3, 4]);
        let b = Poly::new(f5.clone(), vec![2, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
        assert!(matches!(
            a.div_rem(&Poly::zero(f5)),
            Err(AlgebraError::DivisionByZeroPolynomial)
        ));
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        let f2 = Field::new(2, 1, None).unwrap();
        assert_eq!(Poly::zero(f2.clone()).degree(), None);
        assert_eq!(Poly::new(f2, vec![0, 0, 0]).degree(), None);
    }

    #[test]
    fn irreducibility_over_an_extension_field() {
        // Degree-2 polynomials over F_4 are irreducible exactly when they
        // have no root; compare against that independent criterion.
        let f4 = Field::new(2, 2, None).unwrap();
        for c in 0..4 {
            for b in 0..4 {
                let p = Poly::new(f4.clone(), vec![c, b, 1]);
                let has_root = f4.elements().any(|x| p.eval(x) == 0);
                assert_eq!(p.is_irreducible(), !has_root, "x^2 + {b}x + {c} over F_4");
            }
        }
    }

    #[test]
    fn gcd_is_monic() {
        let f5 = Field::new(5, 1, None).unwrap();
        let a = Poly::new(f5.clone(), vec![4, 0, 1]); // x^2 - 1 = (x-1)(x+1) over F_5
        let b = Poly::new(f5.clone(), vec![1, 1]); // x + 1
        let g = Poly::gcd(&a, &b);
        assert_eq!(g, Poly::new(f5, vec![1, 1]));
    }
}
