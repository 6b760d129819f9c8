#![allow(dead_code)]

pub mod stub;

use std::path::PathBuf;
use std::sync::Arc;

use zeqr::evaluation::{evaluate_run, MetricReport};
use zeqr::ingest::{build_idf_table, load_collection, load_qrels, load_topics, Document, IdfTable, Qrels};
use zeqr::pipeline::{run_sessions, BatchOutput};
use zeqr::reader::OracleReader;
use zeqr::retrieval::{build_index, Analyzer, Bm25Params, Bm25Retriever};
use zeqr::{Config, Mode, PostmodifierRule, Reformulator, Session};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join("mini")
}

pub struct Mini {
    pub collection: Vec<Document>,
    pub sessions: Vec<Session>,
    pub qrels: Qrels,
    pub idf: IdfTable,
    pub retriever: Bm25Retriever,
    pub oracle: Arc<OracleReader>,
}

impl Mini {
    pub fn load() -> Self {
        let dir = fixture_dir();
        let collection = load_collection(&dir.join("collection.jsonl")).unwrap();
        let sessions = load_topics(&dir.join("topics.json"), Some(&collection)).unwrap();
        let qrels = load_qrels(&dir.join("qrels.txt")).unwrap();
        let idf = build_idf_table(&collection).unwrap();
        let index = build_index(&collection, Analyzer::default()).unwrap();
        let retriever = Bm25Retriever::new(Arc::new(index), Bm25Params::default());
        let oracle = Arc::new(OracleReader::from_json_file(&dir.join("oracle.json")).unwrap());
        Mini { collection, sessions, qrels, idf, retriever, oracle }
    }

    pub fn config(mode: Mode) -> Config {
        Config { mode, postmodifier_rule: PostmodifierRule::Strict, ..Config::default() }
    }

    pub fn run(&self, mode: Mode) -> BatchOutput {
        let reformulator = Reformulator::new(self.oracle.clone(), Self::config(mode));
        run_sessions(&self.sessions, &reformulator, &self.idf, &self.retriever, 100, mode.as_str())
    }

    pub fn evaluate(&self, mode: Mode) -> MetricReport {
        evaluate_run(&self.run(mode).results, &self.qrels, 1)
    }
}
