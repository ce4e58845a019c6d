//! Cyclic codes from a generator polynomial dividing `x^n - 1`, including
//! the binary repeated-root family of length `3 * 2^s` generated by
//! `(x+1)^i (x^2+x+1)^j`.

use crate::algebra::{Field, FieldRef, Matrix, Poly};
use crate::codes::LinearCode;

use super::FamilyError;

/// Code of length `n` generated by the cyclic shifts of `g`, which must
/// divide `x^n - 1`. Dimension is `n - deg(g)`.
pub fn cyclic_from_generator(
    field: FieldRef,
    n: usize,
    g: &Poly,
) -> Result<LinearCode, FamilyError> {
    let Some(deg) = g.degree() else {
        return Err(FamilyError::NotADivisor);
    };
    if deg >= n {
        return Err(FamilyError::NotADivisor);
    }
    let g = g.make_monic();
    let xn1 = Poly::x_pow_minus_one(field.clone(), n);
    if !g.divides(&xn1) {
        return Err(FamilyError::NotADivisor);
    }
    let k = n - deg;
    let mut rows = Vec::with_capacity(k);
    for shift in 0..k {
        let mut row = vec![0u64; n];
        for (i, &c) in g.coeffs().iter().enumerate() {
            row[shift + i] = c;
        }
        rows.push(row);
    }
    let gen = Matrix::from_rows(field.clone(), rows)?;
    let code = LinearCode::from_generator(field, gen)?;
    debug_assert_eq!(code.dim(), k);
    Ok(code.with_registration("cyclic", None, None))
}

/// Binary repeated-root cyclic code of length `n = 3 * 2^s` generated by
/// `(x+1)^i (x^2+x+1)^j`. Needs `i, j <= 2^s` for the generator to divide
/// `x^n - 1 = ((x+1)(x^2+x+1))^{2^s}`; dimension is `n - i - 2j`.
pub fn repeated_root_cyclic(s: u32, i: u32, j: u32) -> Result<LinearCode, FamilyError> {
    if s == 0 || s > 10 {
        return Err(FamilyError::ParameterOutOfRange(format!(
            "s={s} outside the supported range 1..=10"
        )));
    }
    let n = 3 * (1usize << s);
    let f2 = Field::new(2, 1, None)?;
    let xp1 = Poly::new(f2.clone(), vec![1, 1]);
    let xxp1 = Poly::new(f2.clone(), vec![1, 1, 1]);
    let mut g = Poly::one(f2.clone());
    for _ in 0..i {
        g = g.mul(&xp1);
    }
    for _ in 0..j {
        g = g.mul(&xxp1);
    }
    cyclic_from_generator(f2, n, &g)
}

/// Cyclic shift by one position: `(c_0, ..., c_{n-1}) -> (c_{n-1}, c_0, ...)`.
#[cfg(test)]
pub(crate) fn shift_word(word: &[u64]) -> Vec<u64> {
    let n = word.len();
    let mut out = vec![0u64; n];
    for (i, &v) in word.iter().enumerate() {
        out[(i + 1) % n] = v;
    }
    out
}
