//! Linear codes as generator matrices in reduced form, with duals, the
//! componentwise (star) product, puncturing/extension, and minimum-distance
//! certificates that never claim more than was actually verified.

mod distance;

pub use distance::{enumerate_min_weight, DistanceCertificate, Provenance, DEFAULT_BUDGET};

use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, FieldRef, Matrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("generator matrix has no nonzero rows")]
    ZeroCode,
    #[error("codes have different lengths")]
    LengthMismatch,
    #[error("codes live over different fields")]
    FieldMismatch,
    #[error("operation would leave no coordinates")]
    EmptyResult,
    #[error("scaling vector contains a zero entry")]
    ZeroScalar,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A linear `[n, k]` code, stored as the unique reduced row echelon basis of
/// its row space. `k = 0` is the distinguished zero code (the dual of the
/// full space), which several operations need to be able to return.
pub struct LinearCode {
    field: FieldRef,
    n: usize,
    k: usize,
    gen: Matrix,
    family: Option<String>,
    /// Distance knowledge contributed by the constructing family
    /// (exact formulas or designed lower bounds).
    registered_distance: Option<DistanceCertificate>,
    registered_dual_distance: Option<DistanceCertificate>,
    dual_cache: OnceLock<Arc<LinearCode>>,
    distance_cache: Mutex<Option<DistanceCertificate>>,
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] code over F_{}", self.n, self.k, self.field.q())?;
        if let Some(fam) = &self.family {
            write!(f, " ({fam})")?;
        }
        Ok(())
    }
}

impl Clone for LinearCode {
    fn clone(&self) -> Self {
        LinearCode {
            field: self.field.clone(),
            n: self.n,
            k: self.k,
            gen: self.gen.clone(),
            family: self.family.clone(),
            registered_distance: self.registered_distance.clone(),
            registered_dual_distance: self.registered_dual_distance.clone(),
            dual_cache: OnceLock::new(),
            distance_cache: Mutex::new(self.distance_cache.lock().unwrap().clone()),
        }
    }
}

impl PartialEq for LinearCode {
    /// Equality as row spaces; the stored basis is canonical.
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field
            && self.n == other.n
            && self.k == other.k
            && self.gen == other.gen
    }
}
impl Eq for LinearCode {}

impl LinearCode {
    /// Builds a code from any spanning matrix: rows are reduced to the
    /// canonical full-rank basis. The all-zero matrix is rejected; the zero
    /// code only ever arises as a result value (e.g. `dual` of the full
    /// space), via [`LinearCode::zero`].
    pub fn from_generator(field: FieldRef, gen: Matrix) -> Result<Self, CodeError> {
        if **gen.field() != *field {
            return Err(CodeError::FieldMismatch);
        }
        let n = gen.cols();
        let (rref, pivots) = gen.rref();
        let k = pivots.len();
        if k == 0 {
            return Err(CodeError::ZeroCode);
        }
        let basis = rref.nonzero_rows();
        Ok(LinearCode::assemble(field, n, k, basis))
    }

    /// The zero code of length `n`: no nonzero codewords, `k = 0`.
    pub fn zero(field: FieldRef, n: usize) -> Self {
        LinearCode::assemble(field.clone(), n, 0, Matrix::zeros(field, 0, n))
    }

    /// The full space `F_q^n`.
    pub fn full(field: FieldRef, n: usize) -> Self {
        LinearCode::assemble(field.clone(), n, n, Matrix::identity(field, n))
    }

    fn assemble(field: FieldRef, n: usize, k: usize, gen: Matrix) -> Self {
        LinearCode {
            field,
            n,
            k,
            gen,
            family: None,
            registered_distance: None,
            registered_dual_distance: None,
            dual_cache: OnceLock::new(),
            distance_cache: Mutex::new(None),
        }
    }

    /// Used by the family constructors to attach distance knowledge.
    pub(crate) fn with_registration(
        mut self,
        family: &str,
        distance: Option<DistanceCertificate>,
        dual_distance: Option<DistanceCertificate>,
    ) -> Self {
        self.family = Some(family.to_string());
        self.registered_distance = distance;
        self.registered_dual_distance = dual_distance;
        self
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn is_zero_code(&self) -> bool {
        self.k == 0
    }

    pub fn is_full_space(&self) -> bool {
        self.k == self.n
    }

    /// Whether every coordinate carries some nonzero codeword. Codes with a
    /// dead coordinate sit outside the hypotheses of the product bounds.
    pub fn has_full_support(&self) -> bool {
        (0..self.n).all(|j| (0..self.k).any(|r| self.gen.get(r, j) != 0))
    }

    pub fn generator(&self) -> &Matrix {
        &self.gen
    }

    pub fn family(&self) -> Option<&str> {
        self.family.as_deref()
    }

    pub fn registered_distance(&self) -> Option<&DistanceCertificate> {
        self.registered_distance.as_ref()
    }

    /// Encodes a message of length `k`.
    pub fn encode(&self, message: &[u64]) -> Result<Vec<u64>, CodeError> {
        Ok(self.gen.vec_mul(message)?)
    }

    /// Membership test for a word of length `n`.
    pub fn contains(&self, word: &[u64]) -> bool {
        if word.len() != self.n {
            return false;
        }
        if word.iter().all(|&v| v == 0) {
            return true;
        }
        if self.k == 0 {
            return false;
        }
        let mut rows = self.gen.row_vecs();
        rows.push(word.to_vec());
        let stacked = Matrix::from_rows(self.field.clone(), rows).expect("consistent widths");
        stacked.rank() == self.k
    }

    /// Row-space containment `self ⊆ other`.
    pub fn subset_of(&self, other: &LinearCode) -> bool {
        if self.n != other.n || *self.field != *other.field {
            return false;
        }
        (0..self.k).all(|r| other.contains(self.gen.row(r)))
    }

    /// The Euclidean dual. Duals of registered families inherit the family's
    /// dual-distance knowledge, so e.g. the dual of a BCH extension still
    /// carries its designed bound.
    pub fn dual(&self) -> Arc<LinearCode> {
        self.dual_cache
            .get_or_init(|| {
                let mut d = if self.k == 0 {
                    LinearCode::full(self.field.clone(), self.n)
                } else if self.k == self.n {
                    LinearCode::zero(self.field.clone(), self.n)
                } else {
                    let ns = self.gen.nullspace();
                    let (rref, pivots) = ns.rref();
                    let basis = rref.nonzero_rows();
                    LinearCode::assemble(self.field.clone(), self.n, pivots.len(), basis)
                };
                d.registered_distance = self.registered_dual_distance.clone();
                d.registered_dual_distance = self.registered_distance.clone();
                if let Some(fam) = &self.family {
                    d.family = Some(format!("dual({fam})"));
                }
                Arc::new(d)
            })
            .clone()
    }

    /// Componentwise (Schur) product span: all pairwise products of basis
    /// rows, reduced. May legitimately be the zero code when the supports of
    /// the two codes are disjoint.
    pub fn star_product(&self, other: &LinearCode) -> Result<LinearCode, CodeError> {
        if self.n != other.n {
            return Err(CodeError::LengthMismatch);
        }
        if *self.field != *other.field {
            return Err(CodeError::FieldMismatch);
        }
        if self.k == 0 || other.k == 0 {
            return Ok(LinearCode::zero(self.field.clone(), self.n));
        }
        let f = &self.field;
        let mut rows = Vec::with_capacity(self.k * other.k);
        for i in 0..self.k {
            for j in 0..other.k {
                let a = self.gen.row(i);
                let b = other.gen.row(j);
                rows.push((0..self.n).map(|c| f.mul(a[c], b[c])).collect::<Vec<u64>>());
            }
        }
        let m = Matrix::from_rows(self.field.clone(), rows)?;
        let mut star = match LinearCode::from_generator(self.field.clone(), m) {
            Ok(code) => code,
            Err(CodeError::ZeroCode) => return Ok(LinearCode::zero(self.field.clone(), self.n)),
            Err(e) => return Err(e),
        };
        // A star product that collapses onto an operand (e.g. repetition
        // times anything) keeps that operand's distance knowledge.
        for side in [self, other] {
            if star == *side {
                star.family = side.family.clone();
                star.registered_distance = side.registered_distance.clone();
                star.registered_dual_distance = side.registered_dual_distance.clone();
                break;
            }
        }
        Ok(star)
    }

    /// Minimum-distance certificate under an enumeration budget.
    ///
    /// Priority: an exact registered formula; otherwise full message
    /// enumeration when `q^k` fits the budget; otherwise honest bounds
    /// (registered designed lower bound or 1, Singleton upper bound).
    /// Returns `None` for the zero code, whose distance is undefined.
    pub fn min_distance(&self, budget: u64) -> Option<DistanceCertificate> {
        if self.k == 0 {
            return None;
        }
        if let Some(cached) = self.distance_cache.lock().unwrap().as_ref() {
            if cached.is_exact() {
                return Some(cached.clone());
            }
        }
        let cert = self.compute_distance(budget);
        let mut cache = self.distance_cache.lock().unwrap();
        let better = match cache.as_ref() {
            Some(old) => cert.lo() > old.lo() || cert.hi() < old.hi(),
            None => true,
        };
        if better {
            *cache = Some(cert.clone());
        }
        Some(cert)
    }

    fn compute_distance(&self, budget: u64) -> DistanceCertificate {
        if let Some(reg) = &self.registered_distance {
            if reg.is_exact() {
                return reg.clone();
            }
        }
        let words = (self.field.q() as f64).powi(self.k as i32);
        if words <= budget as f64 {
            let d = enumerate_min_weight(&self.field, &self.gen);
            return DistanceCertificate::exact(d, Provenance::Exhaustive);
        }
        let singleton = self.n - self.k + 1;
        match &self.registered_distance {
            Some(reg) => DistanceCertificate::bounds(
                reg.lo(),
                reg.lo_source().clone(),
                reg.hi().min(singleton),
                if reg.hi() < singleton {
                    reg.hi_source().clone()
                } else {
                    Provenance::SingletonUpper
                },
            ),
            None => DistanceCertificate::bounds(
                1,
                Provenance::Trivial,
                singleton,
                Provenance::SingletonUpper,
            ),
        }
    }

    /// Distance of the dual code under the same budget policy.
    pub fn dual_distance(&self, budget: u64) -> Option<DistanceCertificate> {
        self.dual().min_distance(budget)
    }

    /// Deletes the coordinates in `drop` (sorted or not, duplicates ignored);
    /// the dimension is recomputed since puncturing can collapse rows.
    pub fn puncture(&self, drop: &[usize]) -> Result<LinearCode, CodeError> {
        let keep: Vec<usize> = (0..self.n).filter(|i| !drop.contains(i)).collect();
        if keep.is_empty() {
            return Err(CodeError::EmptyResult);
        }
        if self.k == 0 {
            return Ok(LinearCode::zero(self.field.clone(), keep.len()));
        }
        let sub = self.gen.select_columns(&keep);
        match LinearCode::from_generator(self.field.clone(), sub) {
            Ok(code) => Ok(code),
            Err(CodeError::ZeroCode) => Ok(LinearCode::zero(self.field.clone(), keep.len())),
            Err(e) => Err(e),
        }
    }

    /// Appends one overall-parity coordinate: every extended codeword sums
    /// to zero. Binary designed bounds round up to even, which is what makes
    /// e.g. an odd-designed-distance BCH extension gain one.
    pub fn extend_parity(&self) -> LinearCode {
        let f = &self.field;
        let mut rows = Vec::with_capacity(self.k);
        for r in 0..self.k {
            let row = self.gen.row(r);
            let sum = row.iter().fold(0u64, |acc, &v| f.add(acc, v));
            let mut ext = row.to_vec();
            ext.push(f.neg(sum));
            rows.push(ext);
        }
        let m = Matrix::from_rows(self.field.clone(), rows).expect("consistent widths");
        let mut code = LinearCode::from_generator(self.field.clone(), m)
            .expect("extension preserves rank");
        if let Some(reg) = &self.registered_distance {
            let mut lo = reg.lo();
            if self.field.q() == 2 && lo % 2 == 1 {
                lo += 1;
            }
            let hi = (code.n - code.k + 1).min(reg.hi().saturating_add(1));
            code.registered_distance = Some(DistanceCertificate::bounds(
                lo,
                reg.lo_source().clone(),
                hi,
                Provenance::SingletonUpper,
            ));
            if let Some(fam) = &self.family {
                code.family = Some(format!("{fam}+parity"));
            }
        }
        code
    }

    /// Diagonal (column-scaling) equivalence: coordinate `j` multiplied by
    /// the nonzero scalar `a[j]`. Weight distribution is untouched, so the
    /// distance certificates carry over.
    pub fn scale_equivalent(&self, a: &[u64]) -> Result<LinearCode, CodeError> {
        if a.len() != self.n {
            return Err(CodeError::LengthMismatch);
        }
        if a.iter().any(|&v| v == 0 || v >= self.field.q()) {
            return Err(CodeError::ZeroScalar);
        }
        let f = &self.field;
        let rows: Vec<Vec<u64>> = (0..self.k)
            .map(|r| {
                self.gen
                    .row(r)
                    .iter()
                    .zip(a)
                    .map(|(&v, &s)| f.mul(v, s))
                    .collect()
            })
            .collect();
        let m = Matrix::from_rows(self.field.clone(), rows)?;
        let mut code = LinearCode::from_generator(self.field.clone(), m)?;
        code.registered_distance = self.registered_distance.clone();
        code.registered_dual_distance = self.registered_dual_distance.clone();
        code.family = self.family.clone();
        Ok(code)
    }

    /// `k` coordinates whose generator columns are linearly independent,
    /// greedily preferring the caller's candidates first, then ascending
    /// position. Always exists for a `k`-dimensional code.
    pub fn information_set(&self, preferred: &[usize]) -> Vec<usize> {
        let mut chosen: Vec<usize> = Vec::with_capacity(self.k);
        let all_rows: Vec<usize> = (0..self.k).collect();
        let mut rank = 0;
        for c in preferred.iter().copied().chain(0..self.n) {
            if rank == self.k {
                break;
            }
            if c >= self.n || chosen.contains(&c) {
                continue;
            }
            let mut trial = chosen.clone();
            trial.push(c);
            if self.gen.submatrix_rank(&all_rows, &trial) > rank {
                chosen.push(c);
                rank += 1;
            }
        }
        chosen
    }

    /// Serializable descriptor: field, dimensions, generator rows.
    pub fn descriptor(&self) -> CodeDescriptor {
        CodeDescriptor {
            field: FieldDescriptor {
                p: self.field.p(),
                s: self.field.s(),
                modulus: self.field.modulus().to_vec(),
            },
            n: self.n,
            k: self.k,
            gen: self.gen.row_vecs(),
            family: self.family.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub s: u32,
    pub modulus: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CodeDescriptor {
    pub field: FieldDescriptor,
    pub n: usize,
    pub k: usize,
    pub gen: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn code(field: &FieldRef, rows: Vec<Vec<u64>>) -> LinearCode {
        let m = Matrix::from_rows(field.clone(), rows).unwrap();
        LinearCode::from_generator(field.clone(), m).unwrap()
    }

    #[test]
    fn repetition_from_generator() {
        let f2 = Field::new(2, 1, None).unwrap();
        let c = code(&f2, vec![vec![1, 1, 1]]);
        assert_eq!((c.len(), c.dim()), (3, 1));
    }

    #[test]
    fn duplicate_rows_collapse() {
        let f2 = Field::new(2, 1, None).unwrap();
        let c = code(&f2, vec![vec![1, 1, 1], vec![1, 1, 1]]);
        assert_eq!(c.dim(), 1);
    }

    #[test]
    fn zero_generator_rejected() {
        let f2 = Field::new(2, 1, None).unwrap();
        let m = Matrix::zeros(f2.clone(), 2, 3);
        assert!(matches!(
            LinearCode::from_generator(f2, m),
            Err(CodeError::ZeroCode)
        ));
    }

    #[test]
    fn dual_of_repetition_is_even_weight() {
        let f2 = Field::new(2, 1, None).unwrap();
        let c = code(&f2, vec![vec![1, 1, 1, 1]]);
        let d = c.dual();
        assert_eq!(d.dim(), 3);
        let cert = d.min_distance(DEFAULT_BUDGET).unwrap();
        assert_eq!(cert.exact_value(), Some(2));
        // dual of dual is the original row space
        assert_eq!(*d.dual(), c);
    }

    #[test]
    fn dual_of_full_space_is_zero_code() {
        let f2 = Field::new(2, 1, None).unwrap();
        let full = LinearCode::full(f2, 3);
        let z = full.dual();
        assert!(z.is_zero_code());
        assert!(z.min_distance(DEFAULT_BUDGET).is_none());
        assert!(z.dual().is_full_space());
    }

    #[test]
    fn self_dual_code() {
        let f2 = Field::new(2, 1, None).unwrap();
        let c = code(&f2, vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]]);
        assert_eq!(*c.dual(), c);
    }

    #[test]
    fn star_with_repetition_is_identity() {
        let f2 = Field::new(2, 1, None).unwrap();
        let rep = code(&f2, vec![vec![1, 1, 1]]);
        let d = code(&f2, vec![vec![1, 1, 0], vec![0, 1, 1]]);
        let star = rep.star_product(&d).unwrap();
        assert_eq!(star, d);
    }

    #[test]
    fn star_of_even_weight_pair_fills_space() {
        let f2 = Field::new(2, 1, None).unwrap();
        let c = code(&f2, vec![vec![1, 1, 0], vec![0, 1, 1]]);
        let star = c.star_product(&c).unwrap();
        assert!(star.is_full_space());
    }

    #[test]
    fn star_commutes_and_respects_containment() {
        let f3 = Field::new(3, 1, None).unwrap();
        let c = code(&f3, vec![vec![1, 2, 0, 1], vec![0, 1, 1, 2]]);
        let cbig = code(&f3, vec![vec![1, 2, 0, 1], vec![0, 1, 1, 2], vec![1, 0, 0, 2]]);
        let d = code(&f3, vec![vec![2, 1, 1, 0], vec![0, 0, 1, 1]]);
        assert_eq!(c.star_product(&d).unwrap(), d.star_product(&c).unwrap());
        assert!(c
            .star_product(&d)
            .unwrap()
            .subset_of(&cbig.star_product(&d).unwrap()));
    }

    #[test]
    fn star_length_mismatch_is_an_error() {
        let f2 = Field::new(2, 1, None).unwrap();
        let a = code(&f2, vec![vec![1, 1, 1]]);
        let b = code(&f2, vec![vec![1, 1]]);
        assert!(matches!(a.star_product(&b), Err(CodeError::LengthMismatch)));
    }

    #[test]
    fn repetition_distance_exact() {
        let f2 = Field::new(2, 1, None).unwrap();
        let c = code(&f2, vec![vec![1, 1, 1, 1, 1]]);
        assert_eq!(c.min_distance(DEFAULT_BUDGET).unwrap().exact_value(), Some(5));
    }

    #[test]
    fn singleton_bound_on_exact_certificates() {
        let f3 = Field::new(3, 1, None).unwrap();
        let c = code(&f3, vec![vec![1, 0, 2, 1, 0], vec![0, 1, 1, 2, 2]]);
        let cert = c.min_distance(DEFAULT_BUDGET).unwrap();
        assert!(cert.exact_value().unwrap() <= c.len() - c.dim() + 1);
    }

    #[test]
    fn budget_exhaustion_returns_bounds() {
        let f2 = Field::new(2, 1, None).unwrap();
        let rows: Vec<Vec<u64>> = (0..20u64)
            .map(|i| {
                (0..40u64)
                    .map(|j| if j < 20 { u64::from(i == j) } else { (i * 7 + j * 3 + i * j) % 2 })
                    .collect()
            })
            .collect();
        let c = code(&f2, rows);
        assert_eq!(c.dim(), 20);
        let cert = c.min_distance(1 << 10).unwrap();
        assert!(!cert.is_exact());
        assert!(cert.lo() >= 1);
        assert!(cert.hi() <= c.len() - c.dim() + 1);
    }

    #[test]
    fn extend_parity_repetition() {
        let f2 = Field::new(2, 1, None).unwrap();
        let c = code(&f2, vec![vec![1, 1, 1]]);
        let e = c.extend_parity();
        assert_eq!((e.len(), e.dim()), (4, 1));
        assert_eq!(e.min_distance(DEFAULT_BUDGET).unwrap().exact_value(), Some(4));
    }

    #[test]
    fn puncture_repetition() {
        let f2 = Field::new(2, 1, None).unwrap();
        let c = code(&f2, vec![vec![1, 1, 1]]);
        let p = c.puncture(&[2]).unwrap();
        assert_eq!((p.len(), p.dim()), (2, 1));
    }

    #[test]
    fn scale_equivalence_preserves_distance() {
        let f3 = Field::new(3, 1, None).unwrap();
        let c = code(&f3, vec![vec![1, 1, 1]]);
        let s = c.scale_equivalent(&[1, 2, 1]).unwrap();
        assert_eq!(s.min_distance(DEFAULT_BUDGET).unwrap().exact_value(), Some(3));
        assert!(s.contains(&[1, 2, 1]));
        assert!(matches!(
            c.scale_equivalent(&[1, 0, 1])
                .map(|_| ()),
            Err(CodeError::ZeroScalar)
        ));
        assert_eq!(
            c.scale_equivalent(&[1, 1, 1]).unwrap(),
            c,
            "all-ones scaling is the identity"
        );
    }

    #[test]
    fn scaling_preserves_dual_distance() {
        let f5 = Field::new(5, 1, None).unwrap();
        let c = code(&f5, vec![vec![1, 2, 0, 1, 3], vec![0, 1, 4, 2, 1]]);
        let s = c.scale_equivalent(&[2, 3, 1, 4, 2]).unwrap();
        let d1 = c.dual_distance(DEFAULT_BUDGET).unwrap().exact_value().unwrap();
        let d2 = s.dual_distance(DEFAULT_BUDGET).unwrap().exact_value().unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn information_set_prefers_caller_choice() {
        let f2 = Field::new(2, 1, None).unwrap();
        let c = code(&f2, vec![vec![1, 0, 1], vec![0, 1, 1]]);
        let is = c.information_set(&[2]);
        assert_eq!(is.len(), 2);
        assert_eq!(is[0], 2);
        assert_eq!(c.generator().submatrix_rank(&[0, 1], &is), 2);
    }

    #[test]
    fn information_set_of_repetition() {
        let f2 = Field::new(2, 1, None).unwrap();
        let c = code(&f2, vec![vec![1, 1, 1]]);
        assert_eq!(c.information_set(&[]), vec![0]);
    }
}
