//! Retrieval sessions: the round schedule, the padded queries, and the
//! single-element server response.
//!
//! A round targets a set `S` of servers with pairwise-distinct positions
//! whose parity-check columns are linearly independent; server `j`'s query
//! is `pad[:, j]` plus a unit at the row of file `w` assigned to it. The
//! response vector across servers is then a star-product codeword plus the
//! wanted encoded symbols sitting on `S`, which the syndrome isolates.
//!
//! Pads are drawn from a seeded ChaCha12 stream, one RNG stream per round
//! (stream id = round index + 1), rows consumed in order within a round, so
//! transcripts are reproducible bit for bit from `(inputs, seed)`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::algebra::{FieldRef, Matrix};
use crate::bounds::Rational;
use crate::codes::{LinearCode, DEFAULT_BUDGET};

use super::{PirError, StorageSystem};

/// Byzantine-search caps: beyond these the exhaustive support search is
/// refused rather than silently degraded.
pub const MAX_ROBUST_SERVERS: usize = 40;
pub const MAX_BYZANTINE_BUDGET: usize = 2;

/// How pad rows are drawn. `Uniform` spans the whole retrieval code; the
/// alternative draws from the row space of the given matrix, which exists
/// so tests can prove that an under-spread pad breaks privacy.
#[derive(Debug, Clone)]
pub enum PadSampler {
    Uniform,
    FromGenerator(Matrix),
}

/// One scheduled round: the pad matrix and the `(position, file-row)`
/// assignments.
#[derive(Debug, Clone)]
pub struct RoundPlan {
    /// Distinct server positions with independent parity columns, paired
    /// with the row (within the target file's block) each one carries.
    pub targets: Vec<(usize, usize)>,
    pad: Matrix,
}

impl RoundPlan {
    pub fn positions(&self) -> Vec<usize> {
        self.targets.iter().map(|&(p, _)| p).collect()
    }

    pub fn pad(&self) -> &Matrix {
        &self.pad
    }
}

#[derive(Debug, Clone)]
pub struct RetrievalSession {
    field: FieldRef,
    n: usize,
    stacked_rows: usize,
    target_file: usize,
    rows_per_file: usize,
    storage_code: LinearCode,
    retrieval_code: LinearCode,
    response_code: LinearCode,
    /// Generator of `(C*D)^perp`, the parity-check matrix of the response
    /// code.
    parity: Matrix,
    /// Row space the pads are actually drawn from (the retrieval code's
    /// generator unless a sampler was injected).
    pad_generator: Matrix,
    /// Certified lower bound on `d(C*D)` the plan was sized against.
    star_distance_lo: usize,
    rounds: Vec<RoundPlan>,
    seed: u64,
    byzantine_budget: usize,
    unresponsive_budget: usize,
    achieved_rate: Rational,
}

impl RetrievalSession {
    pub fn rounds(&self) -> &[RoundPlan] {
        &self.rounds
    }

    pub fn round_count(&self) -> usize {
        self.rounds.len()
    }

    pub fn target_file(&self) -> usize {
        self.target_file
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn achieved_rate(&self) -> Rational {
        self.achieved_rate
    }

    pub fn parity(&self) -> &Matrix {
        &self.parity
    }

    pub fn pad_generator(&self) -> &Matrix {
        &self.pad_generator
    }

    pub fn storage_code(&self) -> &LinearCode {
        &self.storage_code
    }

    pub fn retrieval_code(&self) -> &LinearCode {
        &self.retrieval_code
    }

    pub fn response_code(&self) -> &LinearCode {
        &self.response_code
    }

    pub fn star_distance_lo(&self) -> usize {
        self.star_distance_lo
    }

    pub fn server_count(&self) -> usize {
        self.n
    }

    pub fn stacked_rows(&self) -> usize {
        self.stacked_rows
    }

    pub fn rows_per_file(&self) -> usize {
        self.rows_per_file
    }

    pub fn budgets(&self) -> (usize, usize) {
        (self.byzantine_budget, self.unresponsive_budget)
    }

    pub fn is_robust(&self) -> bool {
        self.byzantine_budget + self.unresponsive_budget > 0
    }

    /// The `n` query vectors of one round: `q_j = pad[:, j] + delta[:, j]`,
    /// where delta has a single 1 at `(w*b + row, position)` per target.
    pub fn make_queries(&self, round: usize) -> Result<Vec<Vec<u64>>, PirError> {
        let plan = self
            .rounds
            .get(round)
            .ok_or_else(|| PirError::ShapeMismatch(format!("round {round} out of range")))?;
        let f = &self.field;
        let mut queries: Vec<Vec<u64>> = (0..self.n)
            .map(|j| (0..self.stacked_rows).map(|i| plan.pad.get(i, j)).collect())
            .collect();
        let base = self.target_file * self.rows_per_file;
        for &(pos, row) in &plan.targets {
            let idx = base + row;
            queries[pos][idx] = f.add(queries[pos][idx], 1);
        }
        Ok(queries)
    }
}

/// Inner-product response of one server: its stored column against the
/// query it received.
pub fn server_respond(field: &FieldRef, column: &[u64], query: &[u64]) -> Result<u64, PirError> {
    if column.len() != query.len() {
        return Err(PirError::ShapeMismatch(format!(
            "column of {} entries against query of {}",
            column.len(),
            query.len()
        )));
    }
    let mut acc = 0u64;
    for (&c, &q) in column.iter().zip(query) {
        acc = field.add(acc, field.mul(c, q));
    }
    Ok(acc)
}

/// Everything a plan depends on besides the codes themselves. The
/// enumeration budget caps the distance computation the planner runs on
/// the star product; the defaults are an honest-server schedule.
#[derive(Debug, Clone)]
pub struct PlanOptions {
    pub seed: u64,
    pub byzantine: usize,
    pub unresponsive: usize,
    pub enumeration_budget: u64,
    pub sampler: PadSampler,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions {
            seed: 0,
            byzantine: 0,
            unresponsive: 0,
            enumeration_budget: DEFAULT_BUDGET,
            sampler: PadSampler::Uniform,
        }
    }
}

impl PlanOptions {
    pub fn seeded(seed: u64) -> Self {
        PlanOptions { seed, ..Self::default() }
    }

    pub fn adversarial(seed: u64, byzantine: usize, unresponsive: usize) -> Self {
        PlanOptions { seed, byzantine, unresponsive, ..Self::default() }
    }
}

/// Plans a retrieval of file `w`: schedules rounds, sizes target sets
/// against the certified star-product distance, and draws the pads.
pub fn plan_retrieval(
    system: &StorageSystem,
    w: usize,
    retrieval_code: &LinearCode,
    options: &PlanOptions,
) -> Result<RetrievalSession, PirError> {
    let byzantine_budget = options.byzantine;
    let unresponsive_budget = options.unresponsive;
    let seed = options.seed;
    let sampler = &options.sampler;
    let storage = system.code();
    let field = storage.field().clone();
    let n = storage.len();
    if w >= system.file_count() {
        return Err(PirError::TargetOutOfRange { w, m: system.file_count() });
    }
    if retrieval_code.len() != n || **retrieval_code.field() != *field {
        return Err(PirError::ShapeMismatch(
            "retrieval code must match the storage code's field and length".into(),
        ));
    }

    let star = storage.star_product(retrieval_code)?;
    let star_cert = star.min_distance(options.enumeration_budget);
    let d_lo = star_cert.as_ref().map(|c| c.lo()).unwrap_or(0);
    if d_lo < 2 {
        return Err(PirError::ZeroRetrievalRate);
    }
    let parity_code = star.dual();
    let h = parity_code.dim();
    debug_assert!(h >= d_lo - 1);
    let parity = parity_code.generator().clone();

    let robust = byzantine_budget + unresponsive_budget > 0;
    let cap = if robust {
        if byzantine_budget > MAX_BYZANTINE_BUDGET || n > MAX_ROBUST_SERVERS {
            return Err(PirError::BudgetExceeded(format!(
                "byzantine search capped at n <= {MAX_ROBUST_SERVERS}, b <= {MAX_BYZANTINE_BUDGET}"
            )));
        }
        // Every unknown support the decoder may face is S plus the erased
        // set plus one candidate byzantine set; keeping it under d keeps
        // the solve unique.
        let slack = d_lo as isize - 1 - unresponsive_budget as isize - byzantine_budget as isize;
        if slack < 1 {
            return Err(PirError::InsufficientDistanceForRobustness {
                distance_lo: d_lo,
                needed: 2 + unresponsive_budget + byzantine_budget,
            });
        }
        (slack as usize).min(h)
    } else {
        h
    };

    let b = system.rows_per_file();
    let k = storage.dim();
    // Positions each row must accumulate. Rows prefer the parity pivot
    // columns (mutually independent by construction), rotated per row, so
    // greedy packing fills each round to the parity width.
    let per_row: Vec<Vec<usize>> = if robust {
        let cover = robust_cover(storage, unresponsive_budget, byzantine_budget)?;
        vec![cover; b]
    } else {
        let pivots = parity_code.information_set(&[]);
        (0..b)
            .map(|r| {
                let rotated: Vec<usize> = (0..pivots.len())
                    .map(|i| pivots[(r * k + i) % pivots.len()])
                    .chain((0..n).map(|i| (r * k + i) % n))
                    .collect();
                storage.information_set(&rotated)
            })
            .collect()
    };

    // Interleave rows into a single pair list, then pack rounds greedily.
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let longest = per_row.iter().map(|v| v.len()).max().unwrap_or(0);
    for i in 0..longest {
        for (row, positions) in per_row.iter().enumerate() {
            if let Some(&pos) = positions.get(i) {
                pairs.push((pos, row));
            }
        }
    }

    let mut rounds_targets: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut pending = std::collections::VecDeque::from(pairs);
    while !pending.is_empty() {
        let mut targets: Vec<(usize, usize)> = Vec::new();
        let mut chosen_cols: Vec<usize> = Vec::new();
        let rows_all: Vec<usize> = (0..parity.rows()).collect();
        let mut rest = std::collections::VecDeque::new();
        while let Some((pos, row)) = pending.pop_front() {
            if targets.len() == cap || targets.iter().any(|&(p, _)| p == pos) {
                rest.push_back((pos, row));
                continue;
            }
            let mut trial = chosen_cols.clone();
            trial.push(pos);
            if parity.submatrix_rank(&rows_all, &trial) == trial.len() {
                chosen_cols = trial;
                targets.push((pos, row));
            } else {
                rest.push_back((pos, row));
            }
        }
        if targets.is_empty() {
            // Every pending position has a dependent parity column; with
            // d >= 2 a fresh round always accepts at least one, so this
            // only triggers on inconsistent internal state.
            return Err(PirError::NoFeasibleSchedule);
        }
        rounds_targets.push(targets);
        pending = rest;
    }

    // Draw pads: one RNG stream per round, rows in order.
    let mb = system.stacked_rows();
    let pad_gen = match sampler {
        PadSampler::Uniform => retrieval_code.generator().clone(),
        PadSampler::FromGenerator(m) => {
            if m.cols() != n {
                return Err(PirError::ShapeMismatch("pad generator width".into()));
            }
            m.clone()
        }
    };
    let mut rounds = Vec::with_capacity(rounds_targets.len());
    for (ri, targets) in rounds_targets.into_iter().enumerate() {
        let pad = sample_pad(&field, &pad_gen, mb, seed, ri)?;
        rounds.push(RoundPlan { targets, pad });
    }

    let gained = (b * k) as i128;
    let downloaded = (n * rounds.len()) as i128;
    Ok(RetrievalSession {
        field,
        n,
        stacked_rows: mb,
        target_file: w,
        rows_per_file: b,
        storage_code: storage.clone(),
        retrieval_code: retrieval_code.clone(),
        response_code: star,
        parity,
        pad_generator: pad_gen,
        star_distance_lo: d_lo,
        rounds,
        seed,
        byzantine_budget,
        unresponsive_budget,
        achieved_rate: Rational::new(gained, downloaded),
    })
}

/// Rows-per-file choice that lets a perfectly packed schedule hit the
/// parity-width rate exactly: the smallest `b` with `dim((C*D)^perp)`
/// dividing `b * k`. The planner treats `b` as caller-chosen; this is only
/// the recommendation.
pub fn recommended_rows_per_file(
    storage: &LinearCode,
    retrieval: &LinearCode,
    enumeration_budget: u64,
) -> Result<usize, PirError> {
    let star = storage.star_product(retrieval)?;
    let cert = star.min_distance(enumeration_budget);
    if cert.map(|c| c.lo()).unwrap_or(0) < 2 {
        return Err(PirError::ZeroRetrievalRate);
    }
    let h = star.len() - star.dim();
    let k = storage.dim();
    let g = {
        let (mut a, mut b) = (h, k);
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    };
    Ok(h / g)
}

/// Pad matrix for one round: `mb` rows, each an independently uniform
/// codeword of the sampling row space.
pub(crate) fn sample_pad(
    field: &FieldRef,
    pad_gen: &Matrix,
    rows: usize,
    seed: u64,
    round: usize,
) -> Result<Matrix, PirError> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(round as u64 + 1);
    let n = pad_gen.cols();
    let kd = pad_gen.rows();
    let mut pad = Matrix::zeros(field.clone(), rows, n);
    for i in 0..rows {
        let msg: Vec<u64> = (0..kd).map(|_| uniform_element(&mut rng, field.q())).collect();
        let word = pad_gen.vec_mul(&msg)?;
        for (j, &v) in word.iter().enumerate() {
            pad.set(i, j, v);
        }
    }
    Ok(pad)
}

/// Rejection-sampled uniform draw from `[0, q)`.
fn uniform_element(rng: &mut ChaCha12Rng, q: u64) -> u64 {
    let zone = (u64::MAX / q) * q;
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % q;
        }
    }
}

/// A position set that still contains an information set after deleting any
/// `a` of its members (erasure robustness), grown greedily. With a nonzero
/// Byzantine budget the cover is every position: the cross-candidate row
/// check needs the full redundancy of the storage code.
fn robust_cover(
    code: &LinearCode,
    unresponsive: usize,
    byzantine: usize,
) -> Result<Vec<usize>, PirError> {
    let n = code.len();
    if byzantine > 0 {
        return Ok((0..n).collect());
    }
    let mut cover = code.information_set(&[]);
    loop {
        match erasure_hole(code, &cover, unresponsive) {
            None => return Ok(cover),
            Some(_) => {
                let next = (0..n).find(|p| !cover.contains(p));
                match next {
                    Some(p) => cover.push(p),
                    None => {
                        return Err(PirError::InsufficientDistanceForRobustness {
                            distance_lo: 0,
                            needed: unresponsive + 1,
                        })
                    }
                }
            }
        }
    }
}

/// Finds an `a`-subset of `cover` whose removal destroys every information
/// set, if one exists.
fn erasure_hole(code: &LinearCode, cover: &[usize], a: usize) -> Option<Vec<usize>> {
    let k = code.dim();
    let rows: Vec<usize> = (0..k).collect();
    let mut holes = subsets_up_to(cover, a);
    holes.retain(|h| {
        let remaining: Vec<usize> =
            cover.iter().copied().filter(|p| !h.contains(p)).collect();
        code.generator().submatrix_rank(&rows, &remaining) < k
    });
    holes.into_iter().next()
}

/// All subsets of `items` of size at most `a` (including the empty set).
pub(crate) fn subsets_up_to(items: &[usize], a: usize) -> Vec<Vec<usize>> {
    let n = items.len();
    let mut out = vec![Vec::new()];
    for size in 1..=a.min(n) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.iter().map(|&i| items[i]).collect());
            // Advance to the next index combination.
            let mut i = size as isize - 1;
            while i >= 0 && idx[i as usize] == n - size + i as usize {
                i -= 1;
            }
            if i < 0 {
                break;
            }
            let i = i as usize;
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}
