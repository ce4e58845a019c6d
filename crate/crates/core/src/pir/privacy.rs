//! Privacy audits for the retrieval scheme.
//!
//! Structural: a coalition `T` of servers learns nothing when the
//! restriction of uniform retrieval-code pads to `T` is itself uniform,
//! which holds exactly when every `|T|`-subset of retrieval-generator
//! columns has full rank, i.e. the dual distance exceeds `|T|`. The audit
//! checks all subsets when feasible, otherwise a reported number of random
//! ones, and returns the first rank-deficient witness on failure.
//!
//! Empirical: sample the actual restricted query tuples for two different
//! target files and compare the empirical distributions by total variation.

use std::collections::HashMap;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use serde::Serialize;

use crate::bounds::Rational;
use crate::codes::LinearCode;

use super::{PirError, RetrievalSession};

/// Exhaustive cap: at most this many subsets are enumerated before the
/// audit switches to sampling.
const EXHAUSTIVE_SUBSET_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct StructuralPrivacyReport {
    pub t: usize,
    pub holds: bool,
    /// A rank-deficient coalition when the audit fails.
    pub witness: Option<Vec<usize>>,
    pub exhaustive: bool,
    pub subsets_checked: u64,
}

fn binom(n: usize, k: usize) -> u128 {
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

/// Checks that every coalition of `t` servers sees full-rank pad columns.
pub fn privacy_audit_structural(
    retrieval_code: &LinearCode,
    t: usize,
    seed: u64,
) -> StructuralPrivacyReport {
    let n = retrieval_code.len();
    let gen = retrieval_code.generator();
    let rows: Vec<usize> = (0..retrieval_code.dim()).collect();
    if t == 0 || t > n {
        return StructuralPrivacyReport {
            t,
            holds: t == 0,
            witness: None,
            exhaustive: true,
            subsets_checked: 0,
        };
    }

    let total = binom(n, t);
    if total <= EXHAUSTIVE_SUBSET_CAP {
        let mut idx: Vec<usize> = (0..t).collect();
        let mut checked = 0u64;
        loop {
            checked += 1;
            if gen.submatrix_rank(&rows, &idx) < t {
                return StructuralPrivacyReport {
                    t,
                    holds: false,
                    witness: Some(idx),
                    exhaustive: true,
                    subsets_checked: checked,
                };
            }
            let mut i = t as isize - 1;
            while i >= 0 && idx[i as usize] == n - t + i as usize {
                i -= 1;
            }
            if i < 0 {
                break;
            }
            let i = i as usize;
            idx[i] += 1;
            for j in i + 1..t {
                idx[j] = idx[j - 1] + 1;
            }
        }
        StructuralPrivacyReport { t, holds: true, witness: None, exhaustive: true, subsets_checked: checked }
    } else {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let samples = 100_000u64;
        for _ in 0..samples {
            let mut subset = Vec::with_capacity(t);
            while subset.len() < t {
                let c = (rng.next_u64() % n as u64) as usize;
                if !subset.contains(&c) {
                    subset.push(c);
                }
            }
            subset.sort_unstable();
            if gen.submatrix_rank(&rows, &subset) < t {
                return StructuralPrivacyReport {
                    t,
                    holds: false,
                    witness: Some(subset),
                    exhaustive: false,
                    subsets_checked: samples,
                };
            }
        }
        StructuralPrivacyReport { t, holds: true, witness: None, exhaustive: false, subsets_checked: samples }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalPrivacyReport {
    pub colluding: Vec<usize>,
    pub samples: u64,
    pub total_variation: Rational,
    pub threshold: Rational,
    pub passes: bool,
    /// Per scalar coordinate of the restricted tuple: the largest
    /// single-value frequency gap between the two targets.
    pub marginal_gaps: Vec<Rational>,
}

/// Samples round-0 query tuples restricted to the coalition for the two
/// sessions (which differ only in their target file) and estimates the
/// total variation distance between the restricted distributions.
///
/// Both sessions must share schedule, seed and pad sampler; fresh pads are
/// drawn per sample from a dedicated audit stream.
pub fn privacy_audit_empirical(
    session_a: &RetrievalSession,
    session_b: &RetrievalSession,
    colluding: &[usize],
    samples: u64,
    threshold: Rational,
    seed: u64,
) -> Result<EmpiricalPrivacyReport, PirError> {
    let n = session_a.server_count();
    if colluding.iter().any(|&j| j >= n) {
        return Err(PirError::ShapeMismatch("coalition position out of range".into()));
    }
    if session_a.round_count() == 0 || session_b.round_count() == 0 {
        return Err(PirError::ShapeMismatch("sessions have no rounds".into()));
    }
    let mb = session_a.stacked_rows();
    let q = session_a.storage_code().field().q();
    let field = session_a.storage_code().field().clone();

    // Restricted pad generator: the session's actual pad row space at T.
    let pad_gen = session_a.pad_generator();
    let restricted = pad_gen.select_columns(colluding);
    let kd = pad_gen.rows();

    // Unit contributions of each session's round-0 targets inside T.
    let delta = |session: &RetrievalSession| -> Vec<(usize, usize)> {
        let base = session.target_file() * session.rows_per_file();
        session.rounds()[0]
            .targets
            .iter()
            .filter_map(|&(pos, row)| {
                colluding.iter().position(|&c| c == pos).map(|ci| (base + row, ci))
            })
            .collect()
    };
    let delta_a = delta(session_a);
    let delta_b = delta(session_b);

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX); // audit stream, disjoint from round streams

    let t = colluding.len();
    let cells = t * mb;
    let mut hist_a: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut hist_b: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut marg_a = vec![vec![0u64; q as usize]; cells];
    let mut marg_b = vec![vec![0u64; q as usize]; cells];

    let draw_tuple = |rng: &mut ChaCha12Rng,
                          delta: &[(usize, usize)]|
     -> Result<Vec<u64>, PirError> {
        // tuple[ci * mb + i] = pad_row_i(T)[ci] (+1 on the delta cell)
        let mut tuple = vec![0u64; cells];
        for i in 0..mb {
            let msg: Vec<u64> = (0..kd).map(|_| uniform(rng, q)).collect();
            let row = restricted.vec_mul(&msg)?;
            for (ci, &v) in row.iter().enumerate() {
                tuple[ci * mb + i] = v;
            }
        }
        for &(row_idx, ci) in delta {
            let cell = ci * mb + row_idx;
            tuple[cell] = field.add(tuple[cell], 1);
        }
        Ok(tuple)
    };

    for _ in 0..samples {
        let ta = draw_tuple(&mut rng, &delta_a)?;
        let tb = draw_tuple(&mut rng, &delta_b)?;
        for (cell, &v) in ta.iter().enumerate() {
            marg_a[cell][v as usize] += 1;
        }
        for (cell, &v) in tb.iter().enumerate() {
            marg_b[cell][v as usize] += 1;
        }
        *hist_a.entry(ta).or_insert(0) += 1;
        *hist_b.entry(tb).or_insert(0) += 1;
    }

    let mut abs_diff_sum: i128 = 0;
    let keys: std::collections::BTreeSet<&Vec<u64>> = hist_a.keys().chain(hist_b.keys()).collect();
    for key in keys {
        let a = *hist_a.get(key).unwrap_or(&0) as i128;
        let b = *hist_b.get(key).unwrap_or(&0) as i128;
        abs_diff_sum += (a - b).abs();
    }
    let tv = Rational::new(abs_diff_sum, 2 * samples as i128);

    let marginal_gaps = (0..cells)
        .map(|cell| {
            let gap = (0..q as usize)
                .map(|v| (marg_a[cell][v] as i128 - marg_b[cell][v] as i128).abs())
                .max()
                .unwrap_or(0);
            Rational::new(gap, samples as i128)
        })
        .collect();

    Ok(EmpiricalPrivacyReport {
        colluding: colluding.to_vec(),
        samples,
        total_variation: tv,
        threshold,
        passes: tv <= threshold,
        marginal_gaps,
    })
}

fn uniform(rng: &mut ChaCha12Rng, q: u64) -> u64 {
    let zone = (u64::MAX / q) * q;
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % q;
        }
    }
}
