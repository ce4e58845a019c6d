//! The Singleton-type audit for star-product retrieval schemes, and the
//! rate ledger that packages storage rate, collusion protection, and
//! retrieval rates with their certificate provenance.
//!
//! Three audited cases, for codes `C`, `D` of length `n`:
//! 1. `dim(C) + d'(D) >= n + 2`  implies  `d(C*D) = 1`;
//! 2. otherwise `dim((C*D)^perp) + d'(D) <= n + 2 - dim(C)`;
//! 3. `d'(C) + d'(D) >= n + 3`  implies  `d(C*D) = 1`,
//!
//! where `d'` is the dual distance. With exact certificates the verdicts
//! are binary; with bound certificates they degrade honestly to
//! consistent / unverifiable / violated interval logic.

use serde::Serialize;

use crate::codes::{DistanceCertificate, LinearCode};

use super::{BoundsError, Rational};

/// Interval truth of a claim whose inputs are certificate ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TriState {
    True,
    False,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Premise and conclusion certain, conclusion true (all inputs exact).
    Holds,
    /// Conclusion true for every value the certificates allow, but at least
    /// one input is a bound rather than an exact value.
    Consistent,
    /// The certificates cannot decide the premise or the conclusion.
    Unverifiable,
    /// Conclusion false for every value the certificates allow.
    Violated,
    /// Premise certainly false; nothing to check.
    NotApplicable,
}

fn claim_ge(lhs: (i128, i128), rhs: i128) -> TriState {
    if lhs.0 >= rhs {
        TriState::True
    } else if lhs.1 < rhs {
        TriState::False
    } else {
        TriState::Unknown
    }
}

fn claim_le(lhs: (i128, i128), rhs: i128) -> TriState {
    if lhs.1 <= rhs {
        TriState::True
    } else if lhs.0 > rhs {
        TriState::False
    } else {
        TriState::Unknown
    }
}

fn verdict(premise: TriState, conclusion: TriState, all_exact: bool) -> Verdict {
    match premise {
        TriState::False => Verdict::NotApplicable,
        TriState::Unknown => Verdict::Unverifiable,
        TriState::True => match conclusion {
            TriState::True => {
                if all_exact {
                    Verdict::Holds
                } else {
                    Verdict::Consistent
                }
            }
            TriState::Unknown => Verdict::Unverifiable,
            TriState::False => Verdict::Violated,
        },
    }
}

fn range(cert: &DistanceCertificate) -> (i128, i128) {
    (cert.lo() as i128, cert.hi() as i128)
}

#[derive(Debug, Clone, Serialize)]
pub struct SingletonAuditReport {
    pub n: usize,
    pub dim_c: usize,
    pub dim_d: usize,
    pub dim_star: usize,
    pub dim_star_perp: usize,
    pub dual_distance_d: DistanceCertificate,
    /// Absent when `C` is the full space (its dual distance is undefined);
    /// case 3 is then unverifiable rather than guessed.
    pub dual_distance_c: Option<DistanceCertificate>,
    pub star_distance: DistanceCertificate,
    pub case1_applies: TriState,
    pub case1: Verdict,
    pub case2_applies: TriState,
    pub case2_lhs: (i128, i128),
    pub case2_rhs: i128,
    pub case2: Verdict,
    pub case3_applies: TriState,
    pub case3: Verdict,
}

impl SingletonAuditReport {
    /// The most severe verdict across the three cases.
    pub fn overall(&self) -> Verdict {
        let sev = |v: &Verdict| match v {
            Verdict::Violated => 4,
            Verdict::Unverifiable => 3,
            Verdict::Consistent => 2,
            Verdict::Holds => 1,
            Verdict::NotApplicable => 0,
        };
        *[&self.case1, &self.case2, &self.case3]
            .into_iter()
            .max_by_key(|v| sev(v))
            .unwrap()
    }

    pub fn violated(&self) -> bool {
        self.overall() == Verdict::Violated
    }
}

/// Runs the three-case audit. `D` must be neither the zero code nor the
/// full space: its dual distance is undefined there and the audited
/// quantities do not exist, which is reported as an error, not guessed.
/// Both codes must have full support: a dead coordinate falls outside the
/// product-bound hypotheses (a one-dimensional code on a single coordinate
/// against a dual distance 3 code already violates the case-2 inequality),
/// so such inputs are refused rather than audited to a false negative.
pub fn singleton_audit(
    c: &LinearCode,
    d: &LinearCode,
    budget: u64,
) -> Result<SingletonAuditReport, BoundsError> {
    if c.len() != d.len() || *c.field() != *d.field() {
        return Err(BoundsError::Mismatch);
    }
    if d.is_zero_code() || d.is_full_space() {
        return Err(BoundsError::UndefinedDualDistance);
    }
    if c.is_zero_code() {
        return Err(BoundsError::ZeroCode);
    }
    if !c.has_full_support() || !d.has_full_support() {
        return Err(BoundsError::DegenerateSupport);
    }
    let n = c.len();
    let star = c.star_product(d)?;
    let star_dist = star
        .min_distance(budget)
        .expect("star of nonzero codes with a repetition-free premise");
    let dual_d_dist = d.dual_distance(budget).expect("dual of a proper subspace");
    let dual_c_dist = if c.is_full_space() {
        None
    } else {
        Some(c.dual_distance(budget).expect("dual of a proper subspace"))
    };

    let dim_c = c.dim() as i128;
    let dd = range(&dual_d_dist);
    let sd = range(&star_dist);

    // Case 1: dim(C) + d'(D) >= n + 2  =>  d(C*D) = 1.
    let p1 = claim_ge((dim_c + dd.0, dim_c + dd.1), n as i128 + 2);
    let concl_d1 = if sd.1 == 1 {
        TriState::True
    } else if sd.0 >= 2 {
        TriState::False
    } else {
        TriState::Unknown
    };
    let case1_exact = dual_d_dist.is_exact() && star_dist.is_exact();
    let case1 = verdict(p1, concl_d1, case1_exact);

    // Case 2 premise is the negation of case 1's premise.
    let p2 = match p1 {
        TriState::True => TriState::False,
        TriState::False => TriState::True,
        TriState::Unknown => TriState::Unknown,
    };
    let dim_star_perp = (n - star.dim()) as i128;
    let lhs = (dim_star_perp + dd.0, dim_star_perp + dd.1);
    let rhs = n as i128 + 2 - dim_c;
    let c2 = claim_le(lhs, rhs);
    let case2 = verdict(p2, c2, dual_d_dist.is_exact());

    // Case 3: d'(C) + d'(D) >= n + 3  =>  d(C*D) = 1.
    let (p3, case3) = match &dual_c_dist {
        None => (TriState::Unknown, Verdict::Unverifiable),
        Some(cd) => {
            let cdr = range(cd);
            let p3 = claim_ge((cdr.0 + dd.0, cdr.1 + dd.1), n as i128 + 3);
            let exact = cd.is_exact() && case1_exact;
            (p3, verdict(p3, concl_d1, exact))
        }
    };

    Ok(SingletonAuditReport {
        n,
        dim_c: c.dim(),
        dim_d: d.dim(),
        dim_star: star.dim(),
        dim_star_perp: n - star.dim(),
        dual_distance_d: dual_d_dist,
        dual_distance_c: dual_c_dist,
        star_distance: star_dist,
        case1_applies: p1,
        case1,
        case2_applies: p2,
        case2_lhs: lhs,
        case2_rhs: rhs,
        case2,
        case3_applies: p3,
        case3,
    })
}

/// A rational interval with exactness flag, for rates derived from
/// possibly-bounded distance certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RationalBound {
    pub lo: Rational,
    pub hi: Rational,
    pub exact: bool,
}

impl RationalBound {
    fn from_cert(cert: &DistanceCertificate, map: impl Fn(i128) -> Rational) -> Self {
        RationalBound {
            lo: map(cert.lo() as i128),
            hi: map(cert.hi() as i128),
            exact: cert.is_exact(),
        }
    }
}

/// Everything the scheme's rate story needs in one record, every number
/// carried as an exact rational with its certificate attached.
#[derive(Debug, Clone, Serialize)]
pub struct RateLedger {
    pub n: usize,
    pub storage_dim: usize,
    /// `k_C / n`.
    pub r_storage: Rational,
    /// `(d(C) - 1) / n`: ratio of tolerated failed servers.
    pub failure_ratio: RationalBound,
    /// `d'(D) - 1`: number of colluding servers tolerated.
    pub t_count: (i128, i128),
    pub t_exact: bool,
    /// `(d(C*D) - 1) / n`.
    pub r_retrieval_basic: RationalBound,
    pub dim_star_perp: usize,
    /// `dim((C*D)^perp) / n`: achievable when the star product is transitive.
    pub r_retrieval_transitive: Rational,
    /// Caller-supplied assertion; transitivity is never computed here.
    pub transitive_asserted: bool,
    /// `1 + 2/n - r_basic - t/n - r_storage`; nonnegative whenever the basic
    /// retrieval rate is nonzero.
    pub singleton_slack: RationalBound,
    /// Set when `d(C*D) = 1` is certain.
    pub zero_retrieval_rate: bool,
    pub storage_distance: DistanceCertificate,
    pub star_distance: DistanceCertificate,
    pub dual_distance_d: DistanceCertificate,
}

pub fn rate_ledger(
    c: &LinearCode,
    d: &LinearCode,
    budget: u64,
    transitive_asserted: bool,
) -> Result<RateLedger, BoundsError> {
    if c.len() != d.len() || *c.field() != *d.field() {
        return Err(BoundsError::Mismatch);
    }
    if d.is_zero_code() || d.is_full_space() {
        return Err(BoundsError::UndefinedDualDistance);
    }
    if c.is_zero_code() {
        return Err(BoundsError::ZeroCode);
    }
    let n = c.len();
    let star = c.star_product(d)?;
    let storage_dist = c.min_distance(budget).expect("nonzero storage code");
    let star_dist = star.min_distance(budget).expect("nonzero star product");
    let dual_d_dist = d.dual_distance(budget).expect("dual of a proper subspace");

    let over_n = |v: i128| Rational::new(v, n as i128);
    let r_storage = Rational::new(c.dim() as i128, n as i128);
    let failure_ratio = RationalBound::from_cert(&storage_dist, |d| over_n(d - 1));
    let t_count = (dual_d_dist.lo() as i128 - 1, dual_d_dist.hi() as i128 - 1);
    let r_basic = RationalBound::from_cert(&star_dist, |d| over_n(d - 1));
    let dim_star_perp = n - star.dim();
    let r_transitive = Rational::new(dim_star_perp as i128, n as i128);

    let slack_at = |basic: Rational, t: i128| {
        Rational::one() + Rational::new(2, n as i128) - basic - over_n(t) - r_storage
    };
    // Slack is antitone in both the basic rate and t, so interval ends swap.
    let slack = RationalBound {
        lo: slack_at(r_basic.hi, t_count.1),
        hi: slack_at(r_basic.lo, t_count.0),
        exact: r_basic.exact && dual_d_dist.is_exact(),
    };

    Ok(RateLedger {
        n,
        storage_dim: c.dim(),
        r_storage,
        failure_ratio,
        t_count,
        t_exact: dual_d_dist.is_exact(),
        r_retrieval_basic: r_basic,
        dim_star_perp,
        r_retrieval_transitive: r_transitive,
        transitive_asserted,
        singleton_slack: slack,
        zero_retrieval_rate: star_dist.hi() == 1,
        storage_distance: storage_dist,
        star_distance: star_dist,
        dual_distance_d: dual_d_dist,
    })
}
