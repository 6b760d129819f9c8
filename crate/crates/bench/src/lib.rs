//! Synthetic inputs for the criterion benchmarks in `benches/`.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use zeqr::ingest::Document;
use zeqr::retrieval::{RunResult, ScoredDoc};
use zeqr::Qrels;

fn vocabulary(size: usize) -> Vec<String> {
    (0..size).map(|i| format!("term{i}")).collect()
}

/// Skewed draw so a few terms are frequent and most are rare.
fn draw<'a>(rng: &mut StdRng, vocab: &'a [String]) -> &'a str {
    let r: f64 = rng.random();
    &vocab[((r * r * r) * vocab.len() as f64) as usize]
}

pub fn collection(num_docs: usize, seed: u64) -> Vec<Document> {
    let mut rng = StdRng::seed_from_u64(seed);
    let vocab = vocabulary(5000);
    (0..num_docs)
        .map(|i| {
            let len = rng.random_range(20..120);
            let words: Vec<&str> = (0..len).map(|_| draw(&mut rng, &vocab)).collect();
            Document::new(format!("doc{i}"), words.join(" "))
        })
        .collect()
}

pub fn queries(count: usize, seed: u64) -> Vec<String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let vocab = vocabulary(5000);
    (0..count)
        .map(|_| {
            let len = rng.random_range(3..12);
            (0..len).map(|_| draw(&mut rng, &vocab)).collect::<Vec<_>>().join(" ")
        })
        .collect()
}

/// Random rankings over `docs_per_query` documents with graded judgments.
pub fn run_and_qrels(num_queries: usize, docs_per_query: usize, seed: u64) -> (Vec<RunResult>, Qrels) {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut qrels = Qrels::new();
    let mut run = Vec::with_capacity(num_queries);
    for q in 0..num_queries {
        let qid = format!("q{q}");
        let ranked = (0..docs_per_query)
            .map(|d| ScoredDoc::new(format!("d{d}"), (docs_per_query - d) as f64))
            .collect();
        for d in 0..docs_per_query {
            if rng.random_bool(0.1) {
                qrels.insert(qid.clone(), format!("d{d}"), rng.random_range(1..4));
            }
        }
        run.push(RunResult::new(qid, ranked, "bench"));
    }
    (run, qrels)
}
