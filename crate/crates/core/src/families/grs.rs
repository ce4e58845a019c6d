//! Generalized Reed-Solomon codes: evaluations of polynomials of degree
//! below `k` at distinct points, with a nonzero column multiplier per
//! coordinate. MDS, so the distance formula `n - k + 1` is exact, and the
//! dual is again (an equivalent of) a GRS code of dimension `n - k`.

use crate::algebra::{FieldRef, Matrix};
use crate::codes::{DistanceCertificate, LinearCode, Provenance};

use super::FamilyError;

pub fn grs(
    field: FieldRef,
    n: usize,
    k: usize,
    evals: &[u64],
    mults: &[u64],
) -> Result<LinearCode, FamilyError> {
    if n > field.q() as usize {
        return Err(FamilyError::LengthExceedsField { n, q: field.q() });
    }
    if evals.len() != n || mults.len() != n {
        return Err(FamilyError::ParameterOutOfRange(format!(
            "expected {n} evaluation points and multipliers"
        )));
    }
    if k == 0 || k > n {
        return Err(FamilyError::ParameterOutOfRange(format!("k={k} not in 1..={n}")));
    }
    let mut seen = evals.to_vec();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(FamilyError::RepeatedEvaluationPoint);
    }
    if mults.iter().any(|&v| v == 0 || v >= field.q()) || evals.iter().any(|&v| v >= field.q()) {
        return Err(FamilyError::ParameterOutOfRange(
            "evaluation points must be field elements and multipliers nonzero".into(),
        ));
    }

    let mut rows = Vec::with_capacity(k);
    for i in 0..k {
        rows.push(
            (0..n)
                .map(|j| field.mul(mults[j], field.pow(evals[j], i as u64)))
                .collect::<Vec<u64>>(),
        );
    }
    let m = Matrix::from_rows(field.clone(), rows)?;
    let code = LinearCode::from_generator(field, m)?;
    debug_assert_eq!(code.dim(), k);

    let dist = DistanceCertificate::exact(n - k + 1, Provenance::FamilyFormula("grs".into()));
    let dual_dist = if k < n {
        Some(DistanceCertificate::exact(
            k + 1,
            Provenance::FamilyFormula("grs-dual".into()),
        ))
    } else {
        None
    };
    Ok(code.with_registration("grs", Some(dist), dual_dist))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::codes::DEFAULT_BUDGET;

    #[test]
    fn constant_polynomials_give_repetition() {
        let f5 = Field::new(5, 1, None).unwrap();
        let c = grs(f5, 4, 1, &[0, 1, 2, 3], &[1, 1, 1, 1]).unwrap();
        assert_eq!((c.len(), c.dim()), (4, 1));
        assert_eq!(c.min_distance(DEFAULT_BUDGET).unwrap().exact_value(), Some(4));
    }

    #[test]
    fn full_dimension_is_the_whole_space() {
        let f5 = Field::new(5, 1, None).unwrap();
        let c = grs(f5, 4, 4, &[0, 1, 2, 3], &[1, 2, 3, 4]).unwrap();
        assert!(c.is_full_space());
        assert_eq!(c.min_distance(DEFAULT_BUDGET).unwrap().exact_value(), Some(1));
    }

    #[test]
    fn formula_matches_enumeration_over_f11() {
        let f11 = Field::new(11, 1, None).unwrap();
        let evals: Vec<u64> = (0..8).collect();
        let c = grs(f11.clone(), 8, 3, &evals, &[1; 8]).unwrap();
        // Bypass the registered formula with a direct enumeration.
        let d = crate::codes::enumerate_min_weight(&f11, c.generator());
        assert_eq!(d, 6);
        assert_eq!(c.min_distance(DEFAULT_BUDGET).unwrap().exact_value(), Some(6));
    }

    #[test]
    fn dual_distance_formula() {
        let f11 = Field::new(11, 1, None).unwrap();
        let evals: Vec<u64> = (0..8).collect();
        let c = grs(f11.clone(), 8, 3, &evals, &[1; 8]).unwrap();
        let cert = c.dual_distance(DEFAULT_BUDGET).unwrap();
        assert_eq!(cert.exact_value(), Some(4));
        // The dual really is an [8, 5] code of distance 4.
        let dual = c.dual();
        assert_eq!(dual.dim(), 5);
        assert_eq!(crate::codes::enumerate_min_weight(&f11, dual.generator()), 4);
    }

    #[test]
    fn repeated_points_rejected() {
        let f5 = Field::new(5, 1, None).unwrap();
        assert!(matches!(
            grs(f5, 3, 2, &[1, 1, 2], &[1, 1, 1]),
            Err(FamilyError::RepeatedEvaluationPoint)
        ));
    }

    #[test]
    fn length_capped_by_field() {
        let f5 = Field::new(5, 1, None).unwrap();
        assert!(matches!(
            grs(f5, 6, 2, &[0, 1, 2, 3, 4, 0], &[1; 6]),
            Err(FamilyError::LengthExceedsField { .. })
        ));
    }

    #[test]
    fn multiplier_scaling_cancels() {
        let f7 = Field::new(7, 1, None).unwrap();
        let evals: Vec<u64> = (1..6).collect();
        let mults = [2u64, 3, 4, 5, 6];
        let c = grs(f7.clone(), 5, 2, &evals, &mults).unwrap();
        let inv: Vec<u64> = mults.iter().map(|&v| f7.inv(v).unwrap()).collect();
        let plain = grs(f7, 5, 2, &evals, &[1; 5]).unwrap();
        assert_eq!(c.scale_equivalent(&inv).unwrap(), plain);
    }
}
