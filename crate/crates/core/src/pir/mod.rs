//! The star-product retrieval protocol: storage encoding, padded queries,
//! single-element responses, syndrome reconstruction, robustness against
//! Byzantine and unresponsive servers, and structural plus empirical
//! privacy audits.

mod privacy;
mod reconstruct;
mod session;
mod storage;

pub use privacy::{
    privacy_audit_empirical, privacy_audit_structural, EmpiricalPrivacyReport,
    StructuralPrivacyReport,
};
pub use reconstruct::{
    decode_file, decode_session, honest_responses, reconstruct_round, RecoveredSymbol,
};
pub use session::{
    plan_retrieval, recommended_rows_per_file, server_respond, PadSampler, PlanOptions,
    RetrievalSession, RoundPlan, MAX_BYZANTINE_BUDGET, MAX_ROBUST_SERVERS,
};
pub use storage::StorageSystem;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::codes::CodeError;

#[derive(Debug, Error)]
pub enum PirError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("file index {w} out of range for {m} files")]
    TargetOutOfRange { w: usize, m: usize },
    #[error("the star product has distance 1: zero retrieval rate")]
    ZeroRetrievalRate,
    #[error(
        "star-product distance lower bound {distance_lo} cannot absorb the adversary \
         (needs at least {needed})"
    )]
    InsufficientDistanceForRobustness { distance_lo: usize, needed: usize },
    #[error("no round schedule covers an information set per row")]
    NoFeasibleSchedule,
    #[error("multiple consistent decodings within the adversary budget")]
    DecodingAmbiguity { round: Option<usize> },
    #[error("adversary budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("round {round} syndrome inconsistent with the planned support")]
    InconsistentRound { round: usize },
    #[error("row {row} lacks an information set among recovered positions")]
    InsufficientSymbols { row: usize },
    #[error("conflicting recovered symbols at row {row}, position {position}")]
    ConflictingSymbols { row: usize, position: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Code(#[from] CodeError),
}
