//! Functional algebraic-geometry codes on elliptic curves in general
//! Weierstrass form `y^2 + a1*xy + a3*y = x^3 + a2*x^2 + a4*x + a6`.
//!
//! Divisors are restricted to multiples `m*O` of the point at infinity, so
//! the Riemann-Roch space has the explicit monomial staircase basis
//! `{ x^a y^b : b <= 1, 2a + 3b <= m }` (x has pole order 2 at O, y has 3).
//! For genus 1 and `0 < m < n` the dimension is exactly `m` and the Goppa
//! bound gives `d >= n - m`.

use crate::algebra::{FieldRef, Matrix};
use crate::codes::{DistanceCertificate, LinearCode, Provenance};

use super::FamilyError;

/// A nonsingular Weierstrass curve with its rational points enumerated and
/// cached at construction, affine points in lexicographic `(x, y)` order and
/// the point at infinity counted separately.
#[derive(Debug, Clone)]
pub struct EllipticCurve {
    field: FieldRef,
    a1: u64,
    a2: u64,
    a3: u64,
    a4: u64,
    a6: u64,
    affine: Vec<(u64, u64)>,
}

impl EllipticCurve {
    pub fn new(
        field: FieldRef,
        a1: u64,
        a2: u64,
        a3: u64,
        a4: u64,
        a6: u64,
    ) -> Result<Self, FamilyError> {
        let f = &field;
        if [a1, a2, a3, a4, a6].iter().any(|&c| c >= f.q()) {
            return Err(FamilyError::ParameterOutOfRange(
                "curve coefficients must be field elements".into(),
            ));
        }
        let curve = EllipticCurve { field: field.clone(), a1, a2, a3, a4, a6, affine: Vec::new() };
        if curve.discriminant() == 0 {
            return Err(FamilyError::SingularCurve);
        }
        let mut affine = Vec::new();
        for x in f.elements() {
            for y in f.elements() {
                if curve.on_curve(x, y) {
                    affine.push((x, y));
                }
            }
        }
        let curve = EllipticCurve { affine, ..curve };
        // Hasse: |N - (q + 1)| <= floor(2*sqrt(q)).
        let n = curve.point_count() as i64;
        let q = f.q() as i64;
        let hasse = 2 * (f.q() as f64).sqrt().floor() as i64;
        debug_assert!((n - (q + 1)).abs() <= hasse, "Hasse bound violated: N={n}, q={q}");
        Ok(curve)
    }

    /// Discriminant of the general Weierstrass model (works in every
    /// characteristic, including 2 and 3).
    pub fn discriminant(&self) -> u64 {
        let f = &self.field;
        let c = |v: u64| f.from_int(v);
        let b2 = f.add(f.mul(self.a1, self.a1), f.mul(c(4), self.a2));
        let b4 = f.add(f.mul(c(2), self.a4), f.mul(self.a1, self.a3));
        let b6 = f.add(f.mul(self.a3, self.a3), f.mul(c(4), self.a6));
        let b8 = {
            let t1 = f.mul(f.mul(self.a1, self.a1), self.a6);
            let t2 = f.mul(c(4), f.mul(self.a2, self.a6));
            let t3 = f.mul(self.a1, f.mul(self.a3, self.a4));
            let t4 = f.mul(self.a2, f.mul(self.a3, self.a3));
            let t5 = f.mul(self.a4, self.a4);
            f.sub(f.add(f.sub(f.add(t1, t2), t3), t4), t5)
        };
        let t_b2b8 = f.mul(f.mul(b2, b2), b8);
        let t_b4 = f.mul(c(8), f.mul(b4, f.mul(b4, b4)));
        let t_b6 = f.mul(c(27), f.mul(b6, b6));
        let t_mix = f.mul(c(9), f.mul(b2, f.mul(b4, b6)));
        f.add(f.sub(f.sub(f.neg(t_b2b8), t_b4), t_b6), t_mix)
    }

    pub fn on_curve(&self, x: u64, y: u64) -> bool {
        let f = &self.field;
        let lhs = f.add(
            f.add(f.mul(y, y), f.mul(self.a1, f.mul(x, y))),
            f.mul(self.a3, y),
        );
        let rhs = f.add(
            f.add(f.mul(x, f.mul(x, x)), f.mul(self.a2, f.mul(x, x))),
            f.add(f.mul(self.a4, x), self.a6),
        );
        lhs == rhs
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    /// Affine rational points, lexicographic by `(x, y)` representation.
    pub fn affine_points(&self) -> &[(u64, u64)] {
        &self.affine
    }

    /// Total number of rational points including the point at infinity.
    pub fn point_count(&self) -> usize {
        self.affine.len() + 1
    }
}

/// Specification of a functional code on an elliptic curve with divisor
/// `G = m * O` evaluated at distinct affine points.
#[derive(Debug, Clone)]
pub struct AgCodeSpec {
    pub curve: EllipticCurve,
    /// Pole order at infinity; `deg G = m`.
    pub m: usize,
    /// Evaluation points: distinct affine rational points.
    pub points: Vec<(u64, u64)>,
}

impl AgCodeSpec {
    /// Uses all affine points of the curve, in their canonical order.
    pub fn all_affine(curve: &EllipticCurve, m: usize) -> Self {
        AgCodeSpec {
            points: curve.affine_points().to_vec(),
            curve: curve.clone(),
            m,
        }
    }
}

/// Monomial staircase basis of `L(m * O)` as `(a, b)` exponent pairs of
/// `x^a y^b`, ordered by pole order `2a + 3b`.
pub(crate) fn riemann_roch_basis(m: usize) -> Vec<(usize, usize)> {
    let mut basis = Vec::new();
    for b in 0..=1usize {
        for a in 0..=m / 2 {
            if 2 * a + 3 * b <= m {
                basis.push((a, b));
            }
        }
    }
    basis.sort_by_key(|&(a, b)| (2 * a + 3 * b, b));
    basis
}

/// The functional code: evaluations of the `L(m*O)` basis at the spec's
/// points. Registered bounds: Goppa `d >= n - m` and, for the dual
/// (the residual code), `d >= deg G - 2g + 2 = m`.
pub fn elliptic_ag(spec: &AgCodeSpec) -> Result<LinearCode, FamilyError> {
    let curve = &spec.curve;
    let field = curve.field().clone();
    let n = spec.points.len();
    let m = spec.m;
    if m == 0 || m >= n {
        return Err(FamilyError::ParameterOutOfRange(format!(
            "pole order m={m} not in 1..{n}"
        )));
    }
    if n > curve.point_count() - 1 {
        return Err(FamilyError::ParameterOutOfRange(format!(
            "{n} evaluation points but the curve only has {}",
            curve.point_count() - 1
        )));
    }
    let mut sorted = spec.points.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(FamilyError::RepeatedEvaluationPoint);
    }
    for &(x, y) in &spec.points {
        if !curve.on_curve(x, y) {
            return Err(FamilyError::PointNotOnCurve { x, y });
        }
    }

    let basis = riemann_roch_basis(m);
    debug_assert_eq!(basis.len(), m, "Riemann-Roch dimension for genus 1");
    let f = &field;
    let mut rows = Vec::with_capacity(basis.len());
    for &(a, b) in &basis {
        rows.push(
            spec.points
                .iter()
                .map(|&(x, y)| {
                    let xa = f.pow(x, a as u64);
                    if b == 0 {
                        xa
                    } else {
                        f.mul(xa, y)
                    }
                })
                .collect::<Vec<u64>>(),
        );
    }
    let gen = Matrix::from_rows(field.clone(), rows)?;
    let code = LinearCode::from_generator(field, gen)?;
    if code.dim() != m {
        return Err(FamilyError::RankDeficiency);
    }

    let dist = DistanceCertificate::bounds(
        n - m,
        Provenance::DesignedBound("ag-goppa".into()),
        n - m + 1,
        Provenance::SingletonUpper,
    );
    let dual_dist = DistanceCertificate::bounds(
        m,
        Provenance::DesignedBound("ag-residual".into()),
        m + 1,
        Provenance::SingletonUpper,
    );
    Ok(code.with_registration("elliptic-ag", Some(dist), Some(dual_dist)))
}
