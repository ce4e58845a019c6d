//! Parametric rate calculators: AG-code scheme parameters (with the robust
//! constraint set), dually-BCH `k_t`/`k_s` tables, the length `q^m + 1` BCH
//! row, and the asymptotic limits for code sequences over `F_{q^2}`.
//!
//! Everything is integer/rational arithmetic: same inputs, bit-identical
//! outputs.

use serde::Serialize;

use super::{BoundsError, Rational};
use crate::families::binomial;

/// Parameters of a star-product scheme built from functional AG codes with
/// divisor degrees `deg1` (storage) and `deg2` (retrieval) on a genus-`g`
/// curve with `n` usable points.
///
/// Two retrieval-rate formulas circulate for this construction and they
/// disagree by exactly `1/n` (a dimension-versus-distance offset), so both
/// are reported, labeled, with a mismatch flag instead of a silent pick.
#[derive(Debug, Clone, Serialize)]
pub struct AgParamsReport {
    pub n: usize,
    pub genus: usize,
    pub deg_storage: usize,
    pub deg_retrieval: usize,
    pub r_storage: Rational,
    /// Colluding servers protected against: `deg2 - 2g + 1`.
    pub t_count: i128,
    /// Basic rate `(n - deg1 - deg2 - 1)/n` from the distance side.
    pub basic_rate: Rational,
    /// Improved rate `(n - deg1 - deg2 + g - 1)/n` under transitivity.
    pub transitive_rate: Rational,
    /// `1 - R_storage - t/n - (3g-2)/n` from the corollary side.
    pub corollary_rate: Rational,
    pub rates_match: bool,
    /// `(n - t - 3g + 1)/n` when the storage is replicated (`deg1 = g`);
    /// for genus 1 this is the `(n - t - 2)/n` specialization.
    pub replication_rate: Option<Rational>,
    pub robust: Option<RobustFeasibility>,
}

/// Feasibility of the colluding + Byzantine + unresponsive constraint set
/// for a third divisor degree `deg3` and budgets `b` (Byzantine) and `a`
/// (unresponsive).
#[derive(Debug, Clone, Serialize)]
pub struct RobustFeasibility {
    pub deg3: usize,
    pub byzantine: usize,
    pub unresponsive: usize,
    /// `2g - 2 < deg3 < n`.
    pub deg3_in_range: bool,
    /// `t + 1 <= deg2`.
    pub collusion_fits: bool,
    /// `2b + a + 1 <= n - deg1 - deg2 - deg3`.
    pub distance_budget_fits: bool,
    /// `2(deg1 + deg2) + deg3 <= n`.
    pub point_budget_fits: bool,
    pub feasible: bool,
    /// `(n - deg1 - deg2 - deg3 - 1)/n`.
    pub robust_rate: Rational,
}

pub fn ag_params(
    n: usize,
    genus: usize,
    deg1: usize,
    deg2: usize,
    robust: Option<(usize, usize, usize)>,
) -> Result<AgParamsReport, BoundsError> {
    let lo = 2 * genus as i128 - 2;
    for deg in [deg1, deg2] {
        if (deg as i128) <= lo || deg >= n {
            return Err(BoundsError::InfeasibleDegrees(format!(
                "degree {deg} outside ({lo}, {n})"
            )));
        }
    }
    if deg1 + deg2 >= n {
        return Err(BoundsError::InfeasibleDegrees(format!(
            "deg1 + deg2 = {} >= n = {n}",
            deg1 + deg2
        )));
    }
    let ni = n as i128;
    let g = genus as i128;
    let (d1, d2) = (deg1 as i128, deg2 as i128);
    let over_n = |v: i128| Rational::new(v, ni);

    let r_storage = over_n(d1 - g + 1);
    let t_count = d2 - 2 * g + 1;
    let basic_rate = over_n(ni - d1 - d2 - 1);
    let transitive_rate = over_n(ni - d1 - d2 + g - 1);
    let corollary_rate =
        Rational::one() - r_storage - over_n(t_count) - over_n(3 * g - 2);
    let replication_rate = if d1 == g {
        Some(over_n(ni - t_count - 3 * g + 1))
    } else {
        None
    };

    let robust = robust.map(|(deg3, b, a)| {
        let d3 = deg3 as i128;
        let deg3_in_range = d3 > lo && deg3 < n;
        let collusion_fits = t_count < d2;
        let distance_budget_fits = (2 * b as i128 + a as i128) < ni - d1 - d2 - d3;
        let point_budget_fits = 2 * (d1 + d2) + d3 <= ni;
        RobustFeasibility {
            deg3,
            byzantine: b,
            unresponsive: a,
            deg3_in_range,
            collusion_fits,
            distance_budget_fits,
            point_budget_fits,
            feasible: deg3_in_range && collusion_fits && distance_budget_fits && point_budget_fits,
            robust_rate: over_n(ni - d1 - d2 - d3 - 1),
        }
    });

    Ok(AgParamsReport {
        n,
        genus,
        deg_storage: deg1,
        deg_retrieval: deg2,
        r_storage,
        t_count,
        basic_rate,
        transitive_rate,
        corollary_rate,
        rates_match: basic_rate == corollary_rate,
        replication_rate,
        robust,
    })
}

/// Binary dually-BCH dimension threshold `k_t` for parameters `m` and
/// `2 <= t <= m-1` (with `r = m - t`):
///
/// `k_t = 2^m - 1 - sum_{i=1}^{floor(m/(r+1))} (-1)^{i-1} (m/i) C(m-ir-1, i-1) 2^{m-i(r+1)}`.
///
/// The summand is rational term by term; the total is an integer, which is
/// checked rather than assumed.
pub fn binary_k_t(m: u32, t: u32) -> Result<i128, BoundsError> {
    dually_bch_k(2, m, t)
}

/// q-ary analogue with `(-1)^{i-1} m (q-1)^i / i` weights.
pub fn qary_k_s(q: u64, m: u32, s: u32) -> Result<i128, BoundsError> {
    if q < 3 {
        return Err(BoundsError::ParamOutOfRange(
            "q-ary table needs q >= 3; use the binary table for q = 2".into(),
        ));
    }
    dually_bch_k(q, m, s)
}

fn dually_bch_k(q: u64, m: u32, t: u32) -> Result<i128, BoundsError> {
    if t < 2 || t > m.saturating_sub(1) {
        return Err(BoundsError::ParamOutOfRange(format!(
            "t={t} outside the formula domain 2..={}",
            m.saturating_sub(1)
        )));
    }
    if m > 24 {
        return Err(BoundsError::ParamOutOfRange(format!("m={m} too large")));
    }
    let r = (m - t) as u64;
    let qm = (q as i128).pow(m);
    let mut sum = Rational::zero();
    let upper = (m as u64) / (r + 1);
    for i in 1..=upper {
        let sign = if i % 2 == 1 { 1 } else { -1 };
        let weight = if q == 2 {
            Rational::new(sign * m as i128, i as i128)
        } else {
            Rational::new(sign * m as i128 * (q as i128 - 1).pow(i as u32), i as i128)
        };
        let choose = binomial(m as u64 - i * r - 1, i - 1) as i128;
        let power = (q as i128).pow((m as u64 - i * (r + 1)).try_into().expect("small exponent"));
        sum = sum + weight * Rational::int(choose) * Rational::int(power);
    }
    let k = Rational::int(qm - 1) - sum;
    if !k.is_integer() {
        return Err(BoundsError::ParamOutOfRange(format!(
            "k_t formula did not produce an integer for q={q}, m={m}, t={t}"
        )));
    }
    Ok(k.num())
}

/// One row of the replicated-storage rate table: retrieval code for
/// `n = q^m - 1` servers with `2^{m-t} - 1` (binary) or `q^{m-s-1} - q + 1`
/// (q-ary) colluding servers protected.
#[derive(Debug, Clone, Serialize)]
pub struct BchRateRow {
    pub q: u64,
    pub m: u32,
    pub t: u32,
    pub n: i128,
    pub k_t: i128,
    /// `(q^m - 1 - k_t) / (q^m - 1)`: lower end of the retrieval-rate range.
    pub rate_lo: Rational,
    pub protection: i128,
    /// Whether `t` lies in the range the dually-BCH dimension statement is
    /// quoted for (`2 <= t <= m-3`); the formula itself evaluates on the
    /// wider domain.
    pub within_stated_range: bool,
}

pub fn bch_rate_row(q: u64, m: u32, t: u32) -> Result<BchRateRow, BoundsError> {
    let k_t = if q == 2 { binary_k_t(m, t)? } else { qary_k_s(q, m, t)? };
    let n = (q as i128).pow(m) - 1;
    let protection = if q == 2 {
        (1i128 << (m - t)) - 1
    } else {
        (q as i128).pow(m - t - 1) - q as i128 + 1
    };
    Ok(BchRateRow {
        q,
        m,
        t,
        n,
        k_t,
        rate_lo: Rational::new(n - k_t, n),
        protection,
        within_stated_range: t + 3 <= m,
    })
}

/// The length `q^m + 1` BCH row: designed distance `delta` protects against
/// `2*delta - 3` colluding servers at rate
/// `(q^m - 2m(delta - 2 - floor((delta-2)/q))) / (q^m + 1)`.
#[derive(Debug, Clone, Serialize)]
pub struct BchPlusOneRow {
    pub q: u64,
    pub m: u32,
    pub delta: u64,
    pub n: i128,
    pub t: i128,
    pub rate: Rational,
}

pub fn bch_plus_one_row(q: u64, m: u32, delta: u64) -> Result<BchPlusOneRow, BoundsError> {
    let cap = (q as i128).pow((m - 1) / 2) + 3;
    if delta < 3 || (delta as i128) > cap {
        return Err(BoundsError::ParamOutOfRange(format!(
            "delta={delta} outside 3..={cap}"
        )));
    }
    let qm = (q as i128).pow(m);
    let d = delta as i128;
    let rate_num = qm - 2 * m as i128 * (d - 2 - (d - 2) / q as i128);
    Ok(BchPlusOneRow {
        q,
        m,
        delta,
        n: qm + 1,
        t: 2 * d - 3,
        rate: Rational::new(rate_num, qm + 1),
    })
}

/// Asymptotic limits for storage/retrieval code sequences over a base field
/// `F_{q^2}` with design rates `R1` (storage) and `R2` (retrieval code).
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticReport {
    pub q: i128,
    pub r_storage: Rational,
    /// `1 - R1 - R2 - 2/(q-1)`.
    pub plain_retrieval: Rational,
    /// `1 - R1 - R2 - 1/(q-1)` for transitive sequences.
    pub transitive_retrieval: Rational,
    /// Colluding-ratio guarantee `R2 - 1/(q-1)`.
    pub t_lower: Rational,
    pub plain_feasible: bool,
    pub transitive_feasible: bool,
}

pub fn asymptotic_calculator(
    q: i128,
    r1: Rational,
    r2: Rational,
) -> Result<AsymptoticReport, BoundsError> {
    if q < 2 {
        return Err(BoundsError::ParamOutOfRange("q must be at least 2".into()));
    }
    if !r1.is_positive() || !r2.is_positive() {
        return Err(BoundsError::InfeasibleRates("rates must be positive".into()));
    }
    let sum = r1 + r2;
    if sum < Rational::new(1, 2) {
        return Err(BoundsError::InfeasibleRates(format!(
            "R1 + R2 = {sum} below 1/2"
        )));
    }
    if sum >= Rational::one() {
        return Err(BoundsError::InfeasibleRates(format!(
            "R1 + R2 = {sum} leaves no retrieval rate"
        )));
    }
    let gap = |c: i128| Rational::new(c, q - 1);
    let plain = Rational::one() - r1 - r2 - gap(2);
    let transitive = Rational::one() - r1 - r2 - gap(1);
    let t_lower = r2 - gap(1);
    Ok(AsymptoticReport {
        q,
        r_storage: r1,
        plain_retrieval: plain,
        transitive_retrieval: transitive,
        t_lower,
        plain_feasible: plain.is_positive(),
        transitive_feasible: transitive.is_positive(),
    })
}
