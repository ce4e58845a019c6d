//! Constructors for the concrete code families the toolkit works with:
//! generalized Reed-Solomon, binary Reed-Muller, cyclic codes from a
//! generator polynomial (including BCH of any coprime length and binary
//! repeated-root cyclic codes), and functional algebraic-geometry codes on
//! elliptic curves.
//!
//! Each constructor registers what it actually knows about distances: exact
//! formulas for GRS and Reed-Muller, designed lower bounds for BCH and the
//! Goppa bound for AG codes. Certificates carry those registry names.

mod bch;
mod cyclic;
mod elliptic;
mod grs;
mod reed_muller;

pub use bch::bch;
pub use cyclic::{cyclic_from_generator, repeated_root_cyclic};
pub use elliptic::{elliptic_ag, AgCodeSpec, EllipticCurve};
pub use grs::grs;
pub use reed_muller::reed_muller;

pub(crate) use reed_muller::binomial;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::codes::CodeError;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("evaluation points must be distinct")]
    RepeatedEvaluationPoint,
    #[error("code length {n} exceeds the field size {q}")]
    LengthExceedsField { n: usize, q: u64 },
    #[error("monomial degree out of range: r={r}, m={m}")]
    DegreeOutOfRange { m: u32, r: u32 },
    #[error("polynomial does not divide x^n - 1")]
    NotADivisor,
    #[error("gcd(q, n) != 1")]
    NotCoprime,
    #[error("designed distance {delta} swallows the whole code")]
    DeltaTooLarge { delta: usize },
    #[error("curve has discriminant zero")]
    SingularCurve,
    #[error("point ({x}, {y}) is not on the curve")]
    PointNotOnCurve { x: u64, y: u64 },
    #[error("evaluation matrix is rank-deficient; AG spec is inconsistent")]
    RankDeficiency,
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Code(#[from] CodeError),
}
