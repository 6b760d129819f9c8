//! Interactive session: each line is the next user turn.

use std::io::{self, BufRead, Write};

use zeqr::{context_for_turn, Config, ReformulationTrace, Reformulator, Session, Turn};

use crate::backend::Backend;
use crate::render;

const HELP: &str = "commands: :reset clears the session, :trace reprints the last trace, :quit exits";

pub fn run<R: BufRead, W: Write>(input: R, out: &mut W, backend: &Backend, config: &Config, k: usize) -> io::Result<()> {
    let reformulator = Reformulator::new(backend.reader.clone(), config.clone());
    let mut turns: Vec<Turn> = Vec::new();
    let mut last: Option<ReformulationTrace> = None;

    writeln!(out, "{HELP}")?;
    write!(out, "> ")?;
    out.flush()?;
    for line in input.lines() {
        let line = line?;
        let text = line.trim();
        match text {
            "" => {}
            ":quit" | ":q" => break,
            ":reset" => {
                turns.clear();
                last = None;
                writeln!(out, "session cleared")?;
            }
            ":trace" => match &last {
                Some(t) => write!(out, "{}", render::trace(t))?,
                None => writeln!(out, "no turn yet")?,
            },
            cmd if cmd.starts_with(':') => writeln!(out, "unknown command `{cmd}`; {HELP}")?,
            query => {
                turns.push(Turn::new(turns.len() + 1, query));
                if let Some(trace) = take_turn(out, &mut turns, backend, &reformulator, k)? {
                    last = Some(trace);
                }
            }
        }
        write!(out, "> ")?;
        out.flush()?;
    }
    writeln!(out)?;
    Ok(())
}

/// Reformulates and searches the newest turn, then records the top
/// document as its passage. Errors are reported and the session goes on.
fn take_turn<W: Write>(
    out: &mut W,
    turns: &mut [Turn],
    backend: &Backend,
    reformulator: &Reformulator,
    k: usize,
) -> io::Result<Option<ReformulationTrace>> {
    let turn_id = turns.len();
    let session = match Session::new("repl", turns.to_vec()) {
        Ok(s) => s,
        Err(e) => {
            writeln!(out, "error: {e}")?;
            return Ok(None);
        }
    };
    let context = match context_for_turn(&session, turn_id, reformulator.config()) {
        Ok(c) => c,
        Err(e) => {
            writeln!(out, "error: {e}")?;
            return Ok(None);
        }
    };
    let mut trace = match reformulator.reformulate(&turns[turn_id - 1], &context, &backend.idf) {
        Ok(t) => t,
        Err(e) => {
            writeln!(out, "reader error: {}", e.source)?;
            *e.trace
        }
    };
    trace.query_id = Some(session.query_id(turn_id));
    write!(out, "{}", render::trace(&trace))?;

    match backend.retriever.search(&trace.q_double_star, k.max(1)) {
        Ok(hits) if hits.is_empty() => writeln!(out, "  no matching documents")?,
        Ok(hits) => {
            for (rank, hit) in hits.iter().enumerate() {
                let body = body_of(backend, &hit.doc_id);
                writeln!(out, "  {}. {} ({:.4}) {}", rank + 1, hit.doc_id, hit.score, snippet(body.unwrap_or("")))?;
            }
            turns[turn_id - 1].canonical_answer = body_of(backend, &hits[0].doc_id).map(str::to_string);
        }
        Err(e) => writeln!(out, "retrieval error: {e}")?,
    }
    Ok(Some(trace))
}

fn body_of<'a>(backend: &'a Backend, doc_id: &str) -> Option<&'a str> {
    backend.documents.as_ref()?.iter().find(|d| d.doc_id == doc_id).map(|d| d.body.as_str())
}

fn snippet(body: &str) -> String {
    const WIDTH: usize = 80;
    if body.chars().count() <= WIDTH {
        body.to_string()
    } else {
        let cut: String = body.chars().take(WIDTH).collect();
        format!("{cut}...")
    }
}
