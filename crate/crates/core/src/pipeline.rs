//! Batch driver: context → reformulation → retrieval for every turn.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use crate::datamodel::{context_for_turn, Session};
use crate::ingest::IdfTable;
use crate::reformulator::{ReformulationTrace, Reformulator};
use crate::retrieval::{Retriever, RunResult};

#[derive(Debug, Clone, PartialEq)]
pub struct TurnFailure {
    pub query_id: String,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct BatchOutput {
    pub results: Vec<RunResult>,
    /// One per attempted turn, including partial traces of failed turns.
    pub traces: Vec<ReformulationTrace>,
    pub failures: Vec<TurnFailure>,
    pub total_turns: usize,
}

impl BatchOutput {
    pub fn all_failed(&self) -> bool {
        self.total_turns > 0 && self.failures.len() == self.total_turns
    }

    fn append(&mut self, other: BatchOutput) {
        self.results.extend(other.results);
        self.traces.extend(other.traces);
        self.failures.extend(other.failures);
        self.total_turns += other.total_turns;
    }
}

/// Processes sessions in order. A failing turn is recorded and skipped;
/// it never aborts the batch.
pub fn run_sessions(
    sessions: &[Session],
    reformulator: &Reformulator,
    idf: &IdfTable,
    retriever: &dyn Retriever,
    depth: usize,
    tag: &str,
) -> BatchOutput {
    let mut out = BatchOutput::default();
    for session in sessions {
        for turn in &session.turns {
            out.total_turns += 1;
            let query_id = session.query_id(turn.turn_id);
            let context = match context_for_turn(session, turn.turn_id, reformulator.config()) {
                Ok(c) => c,
                Err(e) => {
                    out.failures.push(TurnFailure { query_id, message: e.to_string() });
                    continue;
                }
            };
            let trace = match reformulator.reformulate(turn, &context, idf) {
                Ok(mut t) => {
                    t.query_id = Some(query_id.clone());
                    t
                }
                Err(e) => {
                    let mut partial = *e.trace;
                    partial.query_id = Some(query_id.clone());
                    out.traces.push(partial);
                    out.failures.push(TurnFailure { query_id, message: e.source.to_string() });
                    continue;
                }
            };
            match retriever.search(&trace.q_double_star, depth) {
                Ok(ranked) => out.results.push(RunResult::new(query_id, ranked, tag)),
                Err(e) => out.failures.push(TurnFailure { query_id, message: e.to_string() }),
            }
            out.traces.push(trace);
        }
    }
    out
}

/// Same output as [`run_sessions`], with up to `jobs` sessions in flight.
/// Turns within a session stay sequential and results keep input order.
pub fn run_sessions_parallel(
    sessions: &[Session],
    reformulator: &Reformulator,
    idf: &IdfTable,
    retriever: &dyn Retriever,
    depth: usize,
    tag: &str,
    jobs: usize,
) -> BatchOutput {
    if jobs <= 1 || sessions.len() <= 1 {
        return run_sessions(sessions, reformulator, idf, retriever, depth, tag);
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<BatchOutput>>> = Mutex::new((0..sessions.len()).map(|_| None).collect());
    thread::scope(|scope| {
        for _ in 0..jobs.min(sessions.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= sessions.len() {
                    break;
                }
                let out = run_sessions(&sessions[i..=i], reformulator, idf, retriever, depth, tag);
                slots.lock().unwrap()[i] = Some(out);
            });
        }
    });
    let mut merged = BatchOutput::default();
    for out in slots.into_inner().unwrap().into_iter().flatten() {
        merged.append(out);
    }
    merged
}
