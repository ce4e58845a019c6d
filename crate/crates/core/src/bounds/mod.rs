//! Rate accounting for star-product retrieval schemes: the Singleton-type
//! audit, the rate ledger, and the pure-arithmetic parameter calculators.

mod audit;
mod calculators;
mod rational;

pub use audit::{
    rate_ledger, singleton_audit, RateLedger, RationalBound, SingletonAuditReport, TriState,
    Verdict,
};
pub use calculators::{
    ag_params, asymptotic_calculator, bch_plus_one_row, bch_rate_row, binary_k_t, qary_k_s,
    AgParamsReport, AsymptoticReport, BchPlusOneRow, BchRateRow, RobustFeasibility,
};
pub use rational::Rational;

use thiserror::Error;

use crate::codes::CodeError;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("codes must share a field and a length")]
    Mismatch,
    #[error("dual distance undefined for the zero code or the full space")]
    UndefinedDualDistance,
    #[error("a code with a dead coordinate is outside the product-bound hypotheses")]
    DegenerateSupport,
    #[error("the zero code has no rates")]
    ZeroCode,
    #[error("infeasible divisor degrees: {0}")]
    InfeasibleDegrees(String),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("infeasible rate targets: {0}")]
    InfeasibleRates(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}
