//! Ranking metrics, significance testing, and the ambiguity census.

mod census;
mod metrics;
mod significance;

pub use census::{ambiguity_census, AmbiguityCensus, TurnAmbiguity};
pub use metrics::{evaluate_run, score_query, MetricReport, QueryMetrics, NDCG_DEPTH, PRECISION_DEPTH, RECALL_DEPTH};
pub use significance::{paired_t_test, TTestResult};
