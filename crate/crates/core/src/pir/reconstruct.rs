//! Syndrome reconstruction of the targeted symbols and erasure decoding of
//! the file, including the adversarial paths.
//!
//! Honest round: the response vector is `r = c + e` with `c` in the
//! response code and `e` supported on the round's target set `S`, so
//! `H r = H_S e_S` has a unique solution when the parity columns at `S`
//! are independent.
//!
//! Unresponsive servers add erasure unknowns; a Byzantine set adds an
//! unknown support that is searched exhaustively. The search runs per
//! candidate set across the whole session (the adversary's set is fixed for
//! a session), each candidate's file is cross-checked against the storage
//! code's redundancy, and surviving candidates must agree — disagreement is
//! reported as ambiguity, never silently resolved.

use std::collections::BTreeSet;

use crate::algebra::Matrix;

use super::session::subsets_up_to;
use super::{PirError, RetrievalSession, StorageSystem};

/// One recovered encoded symbol `Y[w*b + row, position]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecoveredSymbol {
    /// Row within the target file's block.
    pub row: usize,
    pub position: usize,
    pub value: u64,
}

/// Solves one round's syndrome for the unknown support `W` (targets plus
/// erasures plus an assumed Byzantine set) and returns the clean target
/// symbols. `None` means the syndrome is inconsistent with that support.
fn solve_round(
    session: &RetrievalSession,
    responses: &[Option<u64>],
    round: usize,
    assumed_byzantine: &[usize],
) -> Result<Option<Vec<RecoveredSymbol>>, PirError> {
    let parity = session.parity();
    let n = session.server_count();
    if responses.len() != n {
        return Err(PirError::ShapeMismatch(format!(
            "{} responses for {n} servers",
            responses.len()
        )));
    }
    let plan = &session.rounds()[round];
    let missing: Vec<usize> = (0..n).filter(|&j| responses[j].is_none()).collect();

    let mut support: BTreeSet<usize> = plan.positions().into_iter().collect();
    support.extend(missing.iter().copied());
    support.extend(assumed_byzantine.iter().copied());
    let support: Vec<usize> = support.into_iter().collect();

    let filled: Vec<u64> = responses.iter().map(|r| r.unwrap_or(0)).collect();
    let syndrome = parity.mul_vec(&filled)?;

    let cols = parity.select_columns(&support);
    let rows_all: Vec<usize> = (0..parity.rows()).collect();
    if parity.submatrix_rank(&rows_all, &support) < support.len() {
        // Within the planned budgets any support this size has independent
        // parity columns; a dependent one means the budgets were exceeded.
        return Err(PirError::BudgetExceeded(format!(
            "unknown support {:?} has dependent parity columns",
            support
        )));
    }
    let solution = match cols.solve(&syndrome) {
        Ok(x) => x,
        Err(crate::algebra::AlgebraError::InconsistentSystem) => return Ok(None),
        Err(e) => return Err(e.into()),
    };

    let mut symbols = Vec::new();
    for &(pos, row) in &plan.targets {
        if missing.contains(&pos) || assumed_byzantine.contains(&pos) {
            continue;
        }
        let idx = support.binary_search(&pos).expect("target is in the support");
        symbols.push(RecoveredSymbol { row, position: pos, value: solution[idx] });
    }
    Ok(Some(symbols))
}

/// Reconstructs one round. With a zero Byzantine budget this is the plain
/// (or erasure) syndrome solve; with a nonzero budget every candidate error
/// support outside `S` is tried and all consistent explanations must agree
/// on the recovered symbols.
pub fn reconstruct_round(
    session: &RetrievalSession,
    responses: &[Option<u64>],
    round: usize,
) -> Result<Vec<RecoveredSymbol>, PirError> {
    let (byz, _) = session.budgets();
    if byz == 0 {
        return solve_round(session, responses, round, &[])?
            .ok_or(PirError::InconsistentRound { round });
    }
    let n = session.server_count();
    let plan = &session.rounds()[round];
    let s_positions = plan.positions();
    let candidates_over: Vec<usize> = (0..n)
        .filter(|j| responses[*j].is_some() && !s_positions.contains(j))
        .collect();
    let mut agreed: Option<Vec<RecoveredSymbol>> = None;
    for cand in subsets_up_to(&candidates_over, byz) {
        let Some(symbols) = solve_round(session, responses, round, &cand)? else {
            continue;
        };
        match &agreed {
            None => agreed = Some(symbols),
            Some(prev) => {
                // Compare only positions recovered under both explanations.
                for s in &symbols {
                    if let Some(p) = prev
                        .iter()
                        .find(|p| p.position == s.position && p.row == s.row)
                    {
                        if p.value != s.value {
                            return Err(PirError::DecodingAmbiguity { round: Some(round) });
                        }
                    }
                }
            }
        }
    }
    agreed.ok_or(PirError::BudgetExceeded(
        "no explanation within the Byzantine budget".into(),
    ))
}

/// Erasure-decodes the target file from recovered symbols: every row needs
/// its recovered positions to contain an information set of the storage
/// code. Conflicting duplicate symbols or an inconsistent overdetermined
/// system are decoding failures, not resolved silently.
pub fn decode_file(
    session: &RetrievalSession,
    symbols: &[RecoveredSymbol],
) -> Result<Matrix, PirError> {
    let code = session.storage_code();
    let k = code.dim();
    let b = session.rows_per_file();
    let field = code.field().clone();
    let mut out = Matrix::zeros(field.clone(), b, k);
    for row in 0..b {
        let mut positions = Vec::new();
        let mut values = Vec::new();
        for s in symbols.iter().filter(|s| s.row == row) {
            match positions.iter().position(|&p| p == s.position) {
                Some(i) => {
                    if values[i] != s.value {
                        return Err(PirError::ConflictingSymbols { row, position: s.position });
                    }
                }
                None => {
                    positions.push(s.position);
                    values.push(s.value);
                }
            }
        }
        let rows_all: Vec<usize> = (0..k).collect();
        if code.generator().submatrix_rank(&rows_all, &positions) < k {
            return Err(PirError::InsufficientSymbols { row });
        }
        let sel = code.generator().select_columns(&positions).transpose();
        let x = match sel.solve(&values) {
            Ok(x) => x,
            Err(crate::algebra::AlgebraError::InconsistentSystem) => {
                return Err(PirError::ConflictingSymbols { row, position: positions[0] })
            }
            Err(e) => return Err(e.into()),
        };
        for (c, &v) in x.iter().enumerate() {
            out.set(row, c, v);
        }
    }
    Ok(out)
}

/// Decodes a whole session's responses into the target file block.
///
/// Zero Byzantine budget: each round is solved directly (erasures allowed up
/// to the planned budget) and the file is erasure-decoded. Nonzero budget:
/// every candidate Byzantine set is assumed in turn across all rounds,
/// candidate files are validated against the storage code, and all surviving
/// candidates must produce the same file.
pub fn decode_session(
    session: &RetrievalSession,
    responses_per_round: &[Vec<Option<u64>>],
) -> Result<Matrix, PirError> {
    if responses_per_round.len() != session.round_count() {
        return Err(PirError::ShapeMismatch(format!(
            "{} response vectors for {} rounds",
            responses_per_round.len(),
            session.round_count()
        )));
    }
    let (byz, _) = session.budgets();
    if byz == 0 {
        let mut symbols = Vec::new();
        for (round, responses) in responses_per_round.iter().enumerate() {
            symbols.extend(reconstruct_round(session, responses, round)?);
        }
        return decode_file(session, &symbols);
    }

    let n = session.server_count();
    let all_positions: Vec<usize> = (0..n).collect();
    let mut survivors: Vec<(Vec<usize>, Matrix)> = Vec::new();
    'cand: for cand in subsets_up_to(&all_positions, byz) {
        let mut symbols = Vec::new();
        for (round, responses) in responses_per_round.iter().enumerate() {
            match solve_round(session, responses, round, &cand) {
                Ok(Some(s)) => symbols.extend(s),
                Ok(None) => continue 'cand,
                Err(PirError::BudgetExceeded(_)) => continue 'cand,
                Err(e) => return Err(e),
            }
        }
        match decode_file(session, &symbols) {
            Ok(file) => survivors.push((cand, file)),
            // A candidate that cannot explain the rows consistently is dead.
            Err(PirError::InsufficientSymbols { .. })
            | Err(PirError::ConflictingSymbols { .. }) => continue,
            Err(e) => return Err(e),
        }
    }

    let Some((_, first)) = survivors.first() else {
        return Err(PirError::BudgetExceeded(
            "no Byzantine candidate explains the transcript".into(),
        ));
    };
    if survivors.iter().any(|(_, f)| f != first) {
        return Err(PirError::DecodingAmbiguity { round: None });
    }
    Ok(first.clone())
}

/// Honest responses for every round: what the bus produces with no
/// adversary installed.
pub fn honest_responses(
    system: &StorageSystem,
    session: &RetrievalSession,
) -> Result<Vec<Vec<Option<u64>>>, PirError> {
    let field = system.code().field().clone();
    let mut all = Vec::with_capacity(session.round_count());
    for round in 0..session.round_count() {
        let queries = session.make_queries(round)?;
        let mut responses = Vec::with_capacity(system.server_count());
        for (j, q) in queries.iter().enumerate() {
            let col = system.server_column(j);
            responses.push(Some(super::server_respond(&field, &col, q)?));
        }
        all.push(responses);
    }
    Ok(all)
}
