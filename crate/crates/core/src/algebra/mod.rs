//! Finite-field arithmetic, polynomials, and dense linear algebra: the
//! substrate every code construction and protocol step sits on.

pub mod field;
pub mod matrix;
pub mod poly;

mod extension;

pub use extension::{minimal_polynomial, Embedding};
pub use field::{Field, FieldElement, FieldRef};
pub use matrix::Matrix;
pub use poly::Poly;

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("modulus polynomial is not monic irreducible of the right degree")]
    ReducibleModulus,
    #[error("field F_{p}^{s} exceeds the supported size")]
    FieldTooLarge { p: u64, s: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZeroPolynomial,
    #[error("gcd({q}, {n}) != 1")]
    NotCoprime { q: u64, n: u64 },
    #[error("element does not live in the requested extension tower")]
    NotInExtensionTower,
    #[error("linear system has no solution")]
    InconsistentSystem,
    #[error("matrix dimensions do not match")]
    DimensionMismatch,
}

/// Base-`p` digits of `v`, lowest significance first, padded to `len`.
pub(crate) fn digits_of(v: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    let mut v = v;
    for _ in 0..len {
        out.push(v % p);
        v /= p;
    }
    out
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Partition of `Z/nZ` into `q`-cyclotomic cosets `{i, iq, iq^2, ...}`:
/// each coset sorted ascending, cosets ordered by their smallest member.
pub fn cyclotomic_cosets(q: u64, n: u64) -> Result<Vec<Vec<u64>>, AlgebraError> {
    if n == 1 {
        return Ok(vec![vec![0]]);
    }
    if n == 0 || gcd_u64(q % n, n) != 1 {
        return Err(AlgebraError::NotCoprime { q, n });
    }
    let mut seen = vec![false; n as usize];
    let mut cosets = Vec::new();
    for leader in 0..n {
        if seen[leader as usize] {
            continue;
        }
        let mut coset = BTreeSet::new();
        let mut cur = leader;
        loop {
            if !coset.insert(cur) {
                break;
            }
            seen[cur as usize] = true;
            cur = cur * (q % n) % n;
        }
        cosets.push(coset.into_iter().collect());
    }
    Ok(cosets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosets_mod_7_base_2() {
        let cs = cyclotomic_cosets(2, 7).unwrap();
        assert_eq!(cs, vec![vec![0], vec![1, 2, 4], vec![3, 5, 6]]);
    }

    #[test]
    fn cosets_mod_15_base_2() {
        let cs = cyclotomic_cosets(2, 15).unwrap();
        assert_eq!(
            cs,
            vec![
                vec![0],
                vec![1, 2, 4, 8],
                vec![3, 6, 9, 12],
                vec![5, 10],
                vec![7, 11, 13, 14],
            ]
        );
    }

    #[test]
    fn cosets_trivial_modulus() {
        assert_eq!(cyclotomic_cosets(2, 1).unwrap(), vec![vec![0]]);
    }

    #[test]
    fn cosets_require_coprimality() {
        assert!(matches!(
            cyclotomic_cosets(2, 4),
            Err(AlgebraError::NotCoprime { .. })
        ));
    }

    #[test]
    fn cosets_partition_and_are_closed() {
        for (q, n) in [(2u64, 21u64), (3, 26), (2, 17), (4, 15)] {
            let cs = cyclotomic_cosets(q, n).unwrap();
            let total: usize = cs.iter().map(|c| c.len()).sum();
            assert_eq!(total, n as usize);
            for coset in &cs {
                for &i in coset {
                    assert!(coset.contains(&(i * q % n)));
                }
            }
        }
    }
}
