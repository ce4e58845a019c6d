//! Embeddings `F_q -> F_{q^t}` and minimal polynomials over the base field.
//!
//! The embedding is pinned down deterministically: the image of the base
//! field's residue-class generator is the smallest root (in canonical
//! element order) of the base modulus inside the extension. BCH generator
//! polynomials need exactly this: conjugate products computed upstairs whose
//! coefficients are then certified to lie downstairs.

use std::collections::HashMap;

use super::field::FieldRef;
use super::{digits_of, AlgebraError, Poly};

pub struct Embedding {
    base: FieldRef,
    ext: FieldRef,
    /// Image in the extension of each of the `q` base elements.
    forward: Vec<u64>,
    /// Inverse of `forward`, for projecting subfield values back down.
    backward: HashMap<u64, u64>,
}

impl Embedding {
    pub fn new(base: FieldRef, ext: FieldRef) -> Result<Self, AlgebraError> {
        if base.p() != ext.p() || !ext.s().is_multiple_of(base.s()) {
            return Err(AlgebraError::NotInExtensionTower);
        }
        if *base == *ext {
            let forward: Vec<u64> = base.elements().collect();
            let backward = forward.iter().map(|&v| (v, v)).collect();
            return Ok(Embedding { base, ext, forward, backward });
        }
        // The base modulus has coefficients in F_p, which sits inside the
        // extension with identical representations (constants pack as
        // themselves). Its smallest root in the extension anchors the map.
        let base_modulus = Poly::new(ext.clone(), base.modulus().to_vec());
        let root = ext
            .elements()
            .find(|&x| base_modulus.eval(x) == 0)
            .ok_or(AlgebraError::NotInExtensionTower)?;

        let mut forward = Vec::with_capacity(base.q() as usize);
        let mut backward = HashMap::with_capacity(base.q() as usize);
        for a in base.elements() {
            let digits = digits_of(a, base.p(), base.s() as usize);
            let mut acc = 0u64;
            let mut pow = 1u64;
            for &d in &digits {
                acc = ext.add(acc, ext.mul(d, pow));
                pow = ext.mul(pow, root);
            }
            forward.push(acc);
            backward.insert(acc, a);
        }
        Ok(Embedding { base, ext, forward, backward })
    }

    pub fn base(&self) -> &FieldRef {
        &self.base
    }

    pub fn ext(&self) -> &FieldRef {
        &self.ext
    }

    pub fn embed(&self, a: u64) -> u64 {
        self.forward[a as usize]
    }

    /// Projects an extension element back to the base field if it lies in
    /// the embedded image.
    pub fn project(&self, a: u64) -> Option<u64> {
        self.backward.get(&a).copied()
    }
}

/// Minimal polynomial over the base field of an element `beta` of the
/// extension: the monic product over the Frobenius orbit
/// `(x - beta)(x - beta^q)(x - beta^{q^2}) ...` with every coefficient
/// verified to project into the base field.
pub fn minimal_polynomial(beta: u64, emb: &Embedding) -> Result<Poly, AlgebraError> {
    let ext = emb.ext();
    let q = emb.base().q();

    let mut conjugates = Vec::new();
    let mut cur = beta;
    loop {
        conjugates.push(cur);
        cur = ext.pow(cur, q);
        if cur == beta {
            break;
        }
        if conjugates.len() > ext.s() as usize {
            return Err(AlgebraError::NotInExtensionTower);
        }
    }

    let mut prod = Poly::one(ext.clone());
    for c in conjugates {
        let factor = Poly::new(ext.clone(), vec![ext.neg(c), 1]);
        prod = prod.mul(&factor);
    }

    let coeffs: Option<Vec<u64>> = prod.coeffs().iter().map(|&c| emb.project(c)).collect();
    let coeffs = coeffs.ok_or(AlgebraError::NotInExtensionTower)?;
    Ok(Poly::new(emb.base().clone(), coeffs))
}
