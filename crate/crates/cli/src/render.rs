//! Human-readable trace output shared by `trace` and `repl`.

use std::fmt::Write as _;

use zeqr::reformulator::SkipReason;
use zeqr::ReformulationTrace;

fn outcome(applied: bool, skip: Option<SkipReason>) -> String {
    match (applied, skip) {
        (true, _) => "applied".into(),
        (false, Some(reason)) => format!("skipped: {reason}"),
        (false, None) => "skipped".into(),
    }
}

pub fn trace(t: &ReformulationTrace) -> String {
    let mut out = String::new();
    let id = t.query_id.as_deref().unwrap_or("-");
    writeln!(out, "[{id}] mode={}", t.mode).unwrap();
    writeln!(out, "  raw: {}", t.raw_query).unwrap();
    for s in &t.coref_steps {
        let answer = s.answer.as_ref().map_or("-".to_string(), |a| format!("{:?} ({:.3})", a.text, a.score));
        writeln!(out, "  coref {:?} -> {answer} [{}]", s.pronoun.surface, outcome(s.applied, s.skip_reason)).unwrap();
        writeln!(out, "    Q: {}", s.question).unwrap();
    }
    writeln!(out, "  q*:  {}", t.q_star).unwrap();
    for s in &t.omission_steps {
        let answer = s.answer.as_ref().map_or("-".to_string(), |a| format!("{:?} ({:.3})", a.text, a.score));
        writeln!(
            out,
            "  omission {:?} +{} -> {answer} [{}]",
            s.candidate.surface,
            s.preposition,
            outcome(s.applied, s.skip_reason)
        )
        .unwrap();
        writeln!(out, "    Q: {}", s.question).unwrap();
    }
    writeln!(out, "  q**: {}", t.q_double_star).unwrap();
    out
}
