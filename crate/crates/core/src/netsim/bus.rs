//! In-memory adversarial bus: runs a session against a storage system with
//! per-server hooks for Byzantine mutation, dropped responses, and
//! colluding-transcript capture. Adversarial behaviour is data here, not an
//! error; the decoder decides what survives.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::bounds::Rational;
use crate::pir::{
    decode_session, server_respond, PirError, RetrievalSession, StorageSystem,
};

/// Response mutation: `(round, position, honest value) -> sent value`.
pub type MutationRule = Box<dyn Fn(usize, usize, u64) -> u64>;

/// Hooks keyed by server position. Each hook fires exactly once per
/// message; recording never alters payloads.
#[derive(Default)]
pub struct BusAdversary {
    mutate: BTreeMap<usize, MutationRule>,
    drop: BTreeSet<usize>,
    record: BTreeSet<usize>,
}

impl BusAdversary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Installs a Byzantine mutation at `position`.
    pub fn mutate(mut self, position: usize, rule: MutationRule) -> Self {
        self.mutate.insert(position, rule);
        self
    }

    /// Marks `position` unresponsive.
    pub fn drop_server(mut self, position: usize) -> Self {
        self.drop.insert(position);
        self
    }

    /// Captures the queries `position` receives (a colluding server).
    pub fn record(mut self, position: usize) -> Self {
        self.record.insert(position);
        self
    }

    pub fn byzantine_count(&self) -> usize {
        self.mutate.len()
    }

    pub fn unresponsive_count(&self) -> usize {
        self.drop.len()
    }
}

/// Everything a bus run produces: per-round responses with the missing set
/// already applied, plus the transcripts of recorded servers.
pub struct BusRun {
    pub responses: Vec<Vec<Option<u64>>>,
    /// Exactly the queries each recorded server received, round by round.
    pub transcripts: BTreeMap<usize, Vec<Vec<u64>>>,
}

/// Executes every round of the session over the bus.
pub fn bus_run(
    system: &StorageSystem,
    session: &RetrievalSession,
    adversary: &BusAdversary,
) -> Result<BusRun, PirError> {
    let field = system.code().field().clone();
    let n = system.server_count();
    let mut responses = Vec::with_capacity(session.round_count());
    let mut transcripts: BTreeMap<usize, Vec<Vec<u64>>> =
        adversary.record.iter().map(|&j| (j, Vec::new())).collect();

    for round in 0..session.round_count() {
        let queries = session.make_queries(round)?;
        for (&j, log) in transcripts.iter_mut() {
            log.push(queries[j].clone());
        }
        let mut row = Vec::with_capacity(n);
        for (j, q) in queries.iter().enumerate() {
            if adversary.drop.contains(&j) {
                row.push(None);
                continue;
            }
            let honest = server_respond(&field, &system.server_column(j), q)?;
            let sent = match adversary.mutate.get(&j) {
                Some(rule) => rule(round, j, honest),
                None => honest,
            };
            row.push(Some(sent));
        }
        responses.push(row);
    }
    Ok(BusRun { responses, transcripts })
}

/// Portable record of a finished run: enough to re-decode (replay) the
/// session or to audit the colluding transcripts offline. The schedule is
/// reproducible from `(seed, codes, budgets)`, so only targets, responses
/// and transcripts are carried.
#[derive(Debug, Clone, Serialize)]
pub struct SessionExport {
    pub seed: u64,
    pub target_file: usize,
    pub byzantine_budget: usize,
    pub unresponsive_budget: usize,
    pub achieved_rate: Rational,
    /// Per round: the `(position, file-row)` assignments.
    pub rounds: Vec<Vec<(usize, usize)>>,
    /// Per round, per server: the response, `null` for missing.
    pub responses: Vec<Vec<Option<u64>>>,
    /// Recorded (colluding) servers' query streams.
    pub transcripts: BTreeMap<usize, Vec<Vec<u64>>>,
}

impl SessionExport {
    pub fn new(session: &RetrievalSession, run: &BusRun) -> Self {
        let (byz, unresp) = session.budgets();
        SessionExport {
            seed: session.seed(),
            target_file: session.target_file(),
            byzantine_budget: byz,
            unresponsive_budget: unresp,
            achieved_rate: session.achieved_rate(),
            rounds: session.rounds().iter().map(|r| r.targets.clone()).collect(),
            responses: run.responses.clone(),
            transcripts: run.transcripts.clone(),
        }
    }
}

/// Re-decodes an exported run against a freshly planned session; the plan
/// must reproduce the exported schedule bit for bit.
pub fn replay(
    session: &RetrievalSession,
    export: &SessionExport,
) -> Result<crate::algebra::Matrix, PirError> {
    let planned: Vec<Vec<(usize, usize)>> =
        session.rounds().iter().map(|r| r.targets.clone()).collect();
    if planned != export.rounds || session.seed() != export.seed {
        return Err(PirError::ShapeMismatch(
            "exported schedule does not match the replanned session".into(),
        ));
    }
    decode_session(session, &export.responses)
}

/// Convenience: run the bus and decode, returning the retrieved file block.
pub fn bus_retrieve(
    system: &StorageSystem,
    session: &RetrievalSession,
    adversary: &BusAdversary,
) -> Result<crate::algebra::Matrix, PirError> {
    let run = bus_run(system, session, adversary)?;
    decode_session(session, &run.responses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, Matrix};
    use crate::codes::LinearCode;
    use crate::pir::{plan_retrieval, PlanOptions};

    fn toy() -> (StorageSystem, LinearCode) {
        let f2 = Field::new(2, 1, None).unwrap();
        let rep = LinearCode::from_generator(
            f2.clone(),
            Matrix::from_rows(f2.clone(), vec![vec![1, 1, 1]]).unwrap(),
        )
        .unwrap();
        let even = LinearCode::from_generator(
            f2.clone(),
            Matrix::from_rows(f2.clone(), vec![vec![1, 1, 0], vec![0, 1, 1]]).unwrap(),
        )
        .unwrap();
        let files = vec![
            Matrix::from_rows(f2.clone(), vec![vec![1]]).unwrap(),
            Matrix::from_rows(f2, vec![vec![0]]).unwrap(),
        ];
        (StorageSystem::encode(rep, files).unwrap(), even)
    }

    #[test]
    fn empty_adversary_equals_direct_run() {
        let (sys, even) = toy();
        let session = plan_retrieval(&sys, 1, &even, &PlanOptions::seeded(7)).unwrap();
        let run = bus_run(&sys, &session, &BusAdversary::new()).unwrap();
        let direct = crate::pir::honest_responses(&sys, &session).unwrap();
        assert_eq!(run.responses, direct);
        let file = decode_session(&session, &run.responses).unwrap();
        assert_eq!(&file, sys.file(1));
    }

    #[test]
    fn dropped_server_reaches_the_decoder_as_missing() {
        let (sys, even) = toy();
        let session = plan_retrieval(&sys, 0, &even, &PlanOptions::seeded(7)).unwrap();
        let adversary = BusAdversary::new().drop_server(0);
        let run = bus_run(&sys, &session, &adversary).unwrap();
        for round in &run.responses {
            assert!(round[0].is_none());
        }
    }

    #[test]
    fn colluding_transcript_is_the_exact_query_stream() {
        let (sys, even) = toy();
        let session = plan_retrieval(&sys, 0, &even, &PlanOptions::seeded(13)).unwrap();
        let adversary = BusAdversary::new().record(2);
        let run = bus_run(&sys, &session, &adversary).unwrap();
        let log = &run.transcripts[&2];
        assert_eq!(log.len(), session.round_count());
        for (round, q) in log.iter().enumerate() {
            assert_eq!(q, &session.make_queries(round).unwrap()[2]);
        }
    }

    #[test]
    fn export_replays_to_the_same_file() {
        let (sys, even) = toy();
        let session = plan_retrieval(&sys, 1, &even, &PlanOptions::seeded(19)).unwrap();
        let run = bus_run(&sys, &session, &BusAdversary::new().record(0)).unwrap();
        let export = SessionExport::new(&session, &run);
        let replanned = plan_retrieval(&sys, 1, &even, &PlanOptions::seeded(19)).unwrap();
        let file = replay(&replanned, &export).unwrap();
        assert_eq!(&file, sys.file(1));
        // A different seed fails the schedule check instead of decoding.
        let other = plan_retrieval(&sys, 1, &even, &PlanOptions::seeded(20)).unwrap();
        assert!(replay(&other, &export).is_err());
    }

    #[test]
    fn single_mutation_within_budget_still_decodes() {
        let f5 = Field::new(5, 1, None).unwrap();
        let curve = crate::families::EllipticCurve::new(f5.clone(), 0, 0, 0, 1, 1).unwrap();
        let storage =
            crate::families::elliptic_ag(&crate::families::AgCodeSpec::all_affine(&curve, 2))
                .unwrap();
        let retrieval =
            crate::families::elliptic_ag(&crate::families::AgCodeSpec::all_affine(&curve, 3))
                .unwrap();
        let file = Matrix::from_rows(f5, vec![vec![2, 4]]).unwrap();
        let sys = StorageSystem::encode(storage, vec![file]).unwrap();
        let session =
            plan_retrieval(&sys, 0, &retrieval, &PlanOptions::adversarial(3, 1, 0)).unwrap();
        let adversary =
            BusAdversary::new().mutate(4, Box::new(|_, _, v| (v + 3) % 5));
        let got = bus_retrieve(&sys, &session, &adversary).unwrap();
        assert_eq!(&got, sys.file(0));
    }
}
