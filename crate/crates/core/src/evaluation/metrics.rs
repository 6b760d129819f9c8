use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ingest::Qrels;
use crate::retrieval::RunResult;

pub const NDCG_DEPTH: usize = 5;
pub const PRECISION_DEPTH: usize = 5;
pub const RECALL_DEPTH: usize = 100;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct QueryMetrics {
    pub ndcg_at_5: f64,
    pub p_at_5: f64,
    pub r_at_100: f64,
    pub ap: f64,
}

impl QueryMetrics {
    pub const NAMES: [&'static str; 4] = ["ndcg@5", "p@5", "r@100", "map"];

    pub fn values(&self) -> [f64; 4] {
        [self.ndcg_at_5, self.p_at_5, self.r_at_100, self.ap]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub per_query: BTreeMap<String, QueryMetrics>,
    /// `None` when no query could be evaluated.
    pub means: Option<QueryMetrics>,
    pub num_queries: usize,
    /// Run queries with no judgments at all.
    pub skipped_unjudged: usize,
    /// Judged run queries without any document at or above the cutoff.
    pub skipped_no_relevant: usize,
}

fn dcg(gains: impl Iterator<Item = u32>) -> f64 {
    gains
        .enumerate()
        .map(|(i, g)| g as f64 / ((i + 2) as f64).log2())
        .sum()
}

/// Scores one ranked list. Unjudged documents count as non-relevant;
/// graded gain feeds NDCG, `grade >= cutoff` decides binary relevance.
/// Returns `None` when the query has no relevant documents.
pub fn score_query(ranked: &[&str], judgments: &BTreeMap<String, u32>, cutoff: u32) -> Option<QueryMetrics> {
    let total_relevant = judgments.values().filter(|&&g| g >= cutoff).count();
    if total_relevant == 0 {
        return None;
    }
    let grade = |doc: &str| judgments.get(doc).copied().unwrap_or(0);

    let actual = dcg(ranked.iter().take(NDCG_DEPTH).map(|d| grade(d)));
    let mut ideal_grades: Vec<u32> = judgments.values().copied().filter(|&g| g > 0).collect();
    ideal_grades.sort_unstable_by(|a, b| b.cmp(a));
    let ideal = dcg(ideal_grades.into_iter().take(NDCG_DEPTH));
    let ndcg_at_5 = if ideal > 0.0 { actual / ideal } else { 0.0 };

    let relevant = |d: &&&str| grade(d) >= cutoff;
    let p_at_5 = ranked.iter().take(PRECISION_DEPTH).filter(relevant).count() as f64 / PRECISION_DEPTH as f64;
    let r_at_100 = ranked.iter().take(RECALL_DEPTH).filter(relevant).count() as f64 / total_relevant as f64;

    let mut hits = 0usize;
    let mut precision_sum = 0.0;
    for (i, d) in ranked.iter().enumerate() {
        if grade(d) >= cutoff {
            hits += 1;
            precision_sum += hits as f64 / (i + 1) as f64;
        }
    }
    let ap = precision_sum / total_relevant as f64;

    Some(QueryMetrics {
        ndcg_at_5,
        p_at_5,
        r_at_100,
        ap,
    })
}

pub fn evaluate_run(run: &[RunResult], qrels: &Qrels, relevance_cutoff: u32) -> MetricReport {
    let mut report = MetricReport::default();
    for result in run {
        let Some(judgments) = qrels.for_query(&result.query_id) else {
            report.skipped_unjudged += 1;
            continue;
        };
        let ranked: Vec<&str> = result.doc_ids().collect();
        match score_query(&ranked, judgments, relevance_cutoff) {
            Some(m) => {
                report.per_query.insert(result.query_id.clone(), m);
            }
            None => report.skipped_no_relevant += 1,
        }
    }
    report.num_queries = report.per_query.len();
    if report.num_queries > 0 {
        let n = report.num_queries as f64;
        let mut sums = [0.0; 4];
        for m in report.per_query.values() {
            for (s, v) in sums.iter_mut().zip(m.values()) {
                *s += v;
            }
        }
        report.means = Some(QueryMetrics {
            ndcg_at_5: sums[0] / n,
            p_at_5: sums[1] / n,
            r_at_100: sums[2] / n,
            ap: sums[3] / n,
        });
    }
    report
}

impl MetricReport {
    /// `query_id  ndcg@5  p@5  r@100  map` rows plus an `all` row of means.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("query_id\tndcg@5\tp@5\tr@100\tmap\n");
        for (q, m) in &self.per_query {
            writeln!(out, "{q}\t{:.4}\t{:.4}\t{:.4}\t{:.4}", m.ndcg_at_5, m.p_at_5, m.r_at_100, m.ap).unwrap();
        }
        match &self.means {
            Some(m) => writeln!(out, "all\t{:.4}\t{:.4}\t{:.4}\t{:.4}", m.ndcg_at_5, m.p_at_5, m.r_at_100, m.ap).unwrap(),
            None => out.push_str("all\tn/a\tn/a\tn/a\tn/a\n"),
        }
        out
    }

    pub fn metric_column(&self, metric: usize) -> BTreeMap<&str, f64> {
        self.per_query.iter().map(|(q, m)| (q.as_str(), m.values()[metric])).collect()
    }
}
