use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use zeqr::evaluation::{ambiguity_census, evaluate_run, paired_t_test, MetricReport, QueryMetrics};
use zeqr::ingest::{build_idf_table, load_collection, load_qrels, load_topic_queries, write_collection, IdfTable};
use zeqr::linguistics::{PronounInventory, RuleTagger};
use zeqr::pipeline::run_sessions_parallel;
use zeqr::reformulator::{read_traces, write_traces};
use zeqr::retrieval::{build_index, load_run, write_run, Analyzer};
use zeqr::{load_topics, Reformulator};

use crate::args::{CensusArgs, EvalArgs, IndexArgs, RunArgs, TraceArgs};
use crate::backend::{Backend, DOCS_FILE, IDF_FILE, INDEX_FILE};
use crate::error::CliError;
use crate::render;
use crate::settings::{required, Settings};

pub fn index(args: &IndexArgs, settings: &Settings) -> Result<(), CliError> {
    let collection_path = required(&args.collection, &settings.file.collection, "collection")?;
    let out = required(&args.out, &settings.file.index, "out")?;
    let docs = load_collection(&collection_path)?;
    let analyzer = Analyzer { remove_stopwords: args.stopwords, stem: args.stem };
    let index = build_index(&docs, analyzer)?;
    let idf = build_idf_table(&docs)?;

    fs::create_dir_all(&out).map_err(|e| CliError::usage(format!("cannot create {}: {e}", out.display())))?;
    index.save(&out.join(INDEX_FILE))?;
    idf.write_cache(&out.join(IDF_FILE))?;
    write_collection(&docs, &out.join(DOCS_FILE))?;
    println!("documents\t{}", index.num_docs());
    println!("terms\t{}", index.num_terms());
    Ok(())
}

pub fn run(args: &RunArgs, settings: &Settings) -> Result<(), CliError> {
    let config = &settings.config;
    let topics_path = required(&args.topics, &settings.file.topics, "topics")?;
    let backend = Backend::open(&args.backend, &settings.file, config)?;
    let sessions = load_topics(&topics_path, backend.documents.as_deref())?;
    if args.depth == 0 {
        return Err(CliError::usage("--depth must be at least 1"));
    }

    let reformulator = Reformulator::new(backend.reader.clone(), config.clone());
    let tag = args.tag.clone().unwrap_or_else(|| format!("zeqr_{}", config.mode));
    let out = run_sessions_parallel(
        &sessions,
        &reformulator,
        &backend.idf,
        backend.retriever.as_ref(),
        args.depth,
        &tag,
        args.jobs.max(1),
    );

    let trace_path = args.trace.clone().unwrap_or_else(|| {
        let mut name = args.out.clone().into_os_string();
        name.push(".trace.jsonl");
        PathBuf::from(name)
    });
    write_run(&out.results, &args.out)?;
    write_traces(&out.traces, &trace_path)?;
    for failure in &out.failures {
        log::warn!("turn {} failed: {}", failure.query_id, failure.message);
    }
    eprintln!(
        "turns\t{}\nretrieved\t{}\nfailed\t{}",
        out.total_turns,
        out.results.len(),
        out.failures.len()
    );
    if out.all_failed() {
        let first = &out.failures[0];
        return Err(CliError::runtime(format!(
            "all {} turns failed; first failure ({}): {}",
            out.total_turns, first.query_id, first.message
        )));
    }
    Ok(())
}

const SIGNIFICANCE_LEVEL: f64 = 0.05;

pub fn eval(args: &EvalArgs, settings: &Settings) -> Result<(), CliError> {
    if args.runs.len() > 2 {
        return Err(CliError::usage("eval takes one or two --run files"));
    }
    let qrels_path = required(&args.qrels, &settings.file.qrels, "qrels")?;
    let qrels = load_qrels(&qrels_path)?;
    let cutoff = settings.config.map_relevance_cutoff;
    let mut reports = Vec::new();
    for path in &args.runs {
        let run = load_run(path)?;
        let report = evaluate_run(&run, &qrels, cutoff);
        if args.runs.len() > 1 {
            println!("# {}", path.display());
        }
        print!("{}", report.to_tsv());
        eprintln!(
            "{}: {} queries scored, {} unjudged, {} without relevant documents",
            path.display(),
            report.num_queries,
            report.skipped_unjudged,
            report.skipped_no_relevant
        );
        reports.push(report);
    }
    if let [a, b] = reports.as_slice() {
        println!();
        print!("{}", significance_table(a, b));
    }
    Ok(())
}

/// Paired t-tests over the queries both runs scored.
fn significance_table(a: &MetricReport, b: &MetricReport) -> String {
    let mut out = String::from("metric\tmean_a\tmean_b\tt\tp\tsignificant\n");
    for (i, name) in QueryMetrics::NAMES.iter().enumerate() {
        let (col_a, col_b) = (a.metric_column(i), b.metric_column(i));
        let (xs, ys): (Vec<f64>, Vec<f64>) =
            col_a.iter().filter_map(|(q, x)| col_b.get(q).map(|y| (*x, *y))).unzip();
        match paired_t_test(&xs, &ys) {
            Ok(t) => {
                let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
                let flag = if t.p_value < SIGNIFICANCE_LEVEL { "yes" } else { "no" };
                writeln!(out, "{name}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{flag}", mean(&xs), mean(&ys), t.t_statistic, t.p_value)
                    .unwrap();
            }
            Err(_) => writeln!(out, "{name}\tn/a\tn/a\tn/a\tn/a\tn/a").unwrap(),
        }
    }
    out
}

pub fn trace(args: &TraceArgs) -> Result<(), CliError> {
    let traces = read_traces(&args.file)?;
    let mut shown = 0;
    for t in traces.iter().filter(|t| args.query.is_none() || t.query_id == args.query) {
        print!("{}", render::trace(t));
        shown += 1;
    }
    if shown == 0 {
        if let Some(q) = &args.query {
            return Err(CliError::usage(format!("no trace for query `{q}` in {}", args.file.display())));
        }
    }
    Ok(())
}

pub fn census(args: &CensusArgs, settings: &Settings) -> Result<(), CliError> {
    let topics = required(&args.topics, &settings.file.topics, "topics")?;
    let sessions = load_topic_queries(&topics)?;
    let idf = match (args.idf.clone().or_else(|| settings.file.idf_cache.clone()), args.index.clone().or_else(|| settings.file.index.clone())) {
        (Some(path), _) => IdfTable::read_cache(&path)?,
        (None, Some(dir)) => IdfTable::read_cache(&dir.join(IDF_FILE))?,
        (None, None) => match &settings.file.collection {
            Some(path) => build_idf_table(&load_collection(path)?)?,
            None => return Err(CliError::usage("census needs --idf or --index")),
        },
    };
    let census = ambiguity_census(&sessions, &idf, &settings.config, &RuleTagger, &PronounInventory::default());
    if args.per_turn {
        print!("{}", census.to_tsv());
    } else {
        print!("{}", census.totals_tsv());
    }
    Ok(())
}
