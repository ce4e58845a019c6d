//! Binary Reed-Muller codes `RM(m, r)`: evaluations of all multilinear
//! monomials of degree at most `r` on the points of `F_2^m`.

use crate::algebra::{Field, Matrix};
use crate::codes::{DistanceCertificate, LinearCode, Provenance};

use super::FamilyError;

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `RM(m, r)` with length `2^m`, dimension `sum_{i<=r} C(m, i)`, and exact
/// distance `2^{m-r}`. The dual is `RM(m, m-r-1)`, which pins the dual
/// distance at `2^{r+1}` whenever `r < m`.
pub fn reed_muller(m: u32, r: u32) -> Result<LinearCode, FamilyError> {
    if r > m {
        return Err(FamilyError::DegreeOutOfRange { m, r });
    }
    if m == 0 || m > 16 {
        return Err(FamilyError::ParameterOutOfRange(format!(
            "m={m} outside the supported range 1..=16"
        )));
    }
    let f2 = Field::new(2, 1, None)?;
    let n = 1usize << m;

    // Monomials as variable subsets, ordered by degree then mask.
    let mut monomials: Vec<u32> = (0u32..1 << m).collect();
    monomials.retain(|t| t.count_ones() <= r);
    monomials.sort_by_key(|t| (t.count_ones(), *t));

    let mut rows = Vec::with_capacity(monomials.len());
    for &t in &monomials {
        rows.push(
            (0..n)
                .map(|p| u64::from((p as u32) & t == t))
                .collect::<Vec<u64>>(),
        );
    }
    let gen = Matrix::from_rows(f2.clone(), rows)?;
    let code = LinearCode::from_generator(f2, gen)?;
    let expected_dim: u128 = (0..=r).map(|i| binomial(m as u64, i as u64)).sum();
    debug_assert_eq!(code.dim() as u128, expected_dim);

    let dist = DistanceCertificate::exact(
        1 << (m - r),
        Provenance::FamilyFormula("reed-muller".into()),
    );
    let dual_dist = if r < m {
        Some(DistanceCertificate::exact(
            1 << (r + 1),
            Provenance::FamilyFormula("reed-muller-dual".into()),
        ))
    } else {
        None
    };
    Ok(code.with_registration("reed-muller", Some(dist), dual_dist))
}
