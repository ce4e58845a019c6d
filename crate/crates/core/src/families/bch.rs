//! Narrow-sense BCH codes of any length `n` coprime to the field size.
//!
//! The generator polynomial is the least common multiple of the minimal
//! polynomials of `alpha, alpha^2, ..., alpha^{delta-1}`, where `alpha` has
//! order `n` inside the splitting field `F_{q^ord}` and `ord` is the
//! multiplicative order of `q` mod `n`. Lengths `q^m - 1` (primitive) and
//! `q^m + 1` come out of the same machinery, no special cases.

use crate::algebra::{cyclotomic_cosets, minimal_polynomial, Embedding, Field, FieldRef, Poly};
use crate::codes::{DistanceCertificate, LinearCode, Provenance};

use super::{cyclic_from_generator, FamilyError};

fn multiplicative_order(q: u64, n: u64) -> u64 {
    let mut acc = q % n;
    let mut ord = 1;
    while acc != 1 {
        acc = acc * q % n;
        ord += 1;
    }
    ord
}

/// Narrow-sense BCH code over `field` of length `n` and designed distance
/// `delta`. The registered certificate is the BCH bound `d >= delta`.
pub fn bch(field: FieldRef, n: usize, delta: usize) -> Result<LinearCode, FamilyError> {
    let q = field.q();
    if n == 0 || gcd(q, n as u64) != 1 {
        return Err(FamilyError::NotCoprime);
    }
    if delta < 2 || delta > n {
        return Err(FamilyError::ParameterOutOfRange(format!(
            "designed distance {delta} not in 2..={n}"
        )));
    }

    let ord = multiplicative_order(q, n as u64);
    let ext = if ord == 1 {
        field.clone()
    } else {
        Field::new(field.p(), field.s() * ord as u32, None)?
    };
    let emb = Embedding::new(field.clone(), ext.clone())?;

    // An element of exact order n: a power of the field generator.
    let group = ext.q() - 1;
    debug_assert_eq!(group % n as u64, 0);
    let alpha = ext.pow(ext.generator(), group / n as u64);
    debug_assert_eq!(ext.order(alpha), n as u64);

    // One minimal polynomial per cyclotomic coset meeting 1..delta-1.
    let cosets = cyclotomic_cosets(q, n as u64)?;
    let mut generator = Poly::one(field.clone());
    for coset in &cosets {
        if coset.iter().any(|&i| i >= 1 && i < delta as u64) {
            let mp = minimal_polynomial(ext.pow(alpha, coset[0]), &emb)?;
            debug_assert_eq!(mp.degree(), Some(coset.len()));
            generator = generator.mul(&mp);
        }
    }
    let deg = generator.degree().unwrap_or(0);
    if deg >= n {
        return Err(FamilyError::DeltaTooLarge { delta });
    }

    let code = cyclic_from_generator(field, n, &generator)?;
    let k = code.dim();
    let singleton = n - k + 1;
    let cert = DistanceCertificate::bounds(
        delta,
        Provenance::DesignedBound("bch".into()),
        singleton,
        Provenance::SingletonUpper,
    );
    Ok(code.with_registration("bch", Some(cert), None))
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{enumerate_min_weight, DEFAULT_BUDGET};

    #[test]
    fn hamming_7_4_from_bch() {
        let f2 = Field::new(2, 1, None).unwrap();
        let c = bch(f2.clone(), 7, 3).unwrap();
        assert_eq!((c.len(), c.dim()), (7, 4));
        assert_eq!(enumerate_min_weight(&f2, c.generator()), 3);
    }

    #[test]
    fn bch_127_21_has_dimension_64() {
        let f2 = Field::new(2, 1, None).unwrap();
        let c = bch(f2, 127, 21).unwrap();
        assert_eq!(c.dim(), 64);
        let cert = c.min_distance(1 << 22).unwrap();
        assert_eq!(cert.lo(), 21);
    }

    #[test]
    fn bch_17_3_uses_the_degree_8_coset() {
        let f2 = Field::new(2, 1, None).unwrap();
        let c = bch(f2.clone(), 17, 3).unwrap();
        assert_eq!((c.len(), c.dim()), (17, 9));
        // Exhaustive distance at least the designed bound.
        let d = enumerate_min_weight(&f2, c.generator());
        assert!(d >= 3, "exhaustive distance {d} below designed bound");
    }

    #[test]
    fn designed_bound_holds_exhaustively_desk_scale() {
        let f2 = Field::new(2, 1, None).unwrap();
        for (n, delta) in [(7usize, 3usize), (15, 3), (15, 5), (15, 7), (21, 3), (17, 3)] {
            let c = bch(f2.clone(), n, delta).unwrap();
            let d = enumerate_min_weight(&f2, c.generator());
            assert!(d >= delta, "BCH({n},{delta}) exhaustive d={d}");
        }
        let f3 = Field::new(3, 1, None).unwrap();
        for (n, delta) in [(8usize, 3usize), (13, 4)] {
            let c = bch(f3.clone(), n, delta).unwrap();
            let d = enumerate_min_weight(&f3, c.generator());
            assert!(d >= delta, "ternary BCH({n},{delta}) exhaustive d={d}");
        }
    }

    #[test]
    fn hamming_15_11() {
        let f2 = Field::new(2, 1, None).unwrap();
        let c = bch(f2, 15, 3).unwrap();
        assert_eq!((c.len(), c.dim()), (15, 11));
        // Its dual is the simplex code: constant weight 8.
        let dual = c.dual();
        let cert = dual.min_distance(DEFAULT_BUDGET).unwrap();
        assert_eq!(cert.exact_value(), Some(8));
    }

    #[test]
    fn extended_hamming_8_4_4() {
        let f2 = Field::new(2, 1, None).unwrap();
        let hamming = bch(f2.clone(), 7, 3).unwrap();
        let extended = hamming.extend_parity();
        assert_eq!((extended.len(), extended.dim()), (8, 4));
        assert_eq!(enumerate_min_weight(&f2, extended.generator()), 4);
        // The designed bound rounds up to even over F_2.
        assert!(extended.min_distance(DEFAULT_BUDGET).unwrap().exact_value() == Some(4));
    }

    #[test]
    fn non_coprime_length_rejected() {
        let f2 = Field::new(2, 1, None).unwrap();
        assert!(matches!(bch(f2, 8, 3), Err(FamilyError::NotCoprime)));
    }

    #[test]
    fn maximal_designed_distance_is_repetition() {
        // Narrow-sense roots never include alpha^0, so even delta = n leaves
        // the one-dimensional repetition code rather than emptying out.
        let f2 = Field::new(2, 1, None).unwrap();
        let c = bch(f2.clone(), 7, 7).unwrap();
        assert_eq!((c.len(), c.dim()), (7, 1));
        assert_eq!(enumerate_min_weight(&f2, c.generator()), 7);
    }
}
