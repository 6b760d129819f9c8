//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

mod common;

use std::collections::{BTreeMap, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestRunner};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use zeqr::evaluation::{ambiguity_census, evaluate_run, paired_t_test, score_query};
use zeqr::ingest::{Document, IdfTable, Qrels};
use zeqr::linguistics::{
    char_slice, find_omission_candidates, tokenize, tokenize_and_tag, OmissionKind, OmissionRules, PronounInventory,
    RuleTagger,
};
use zeqr::reader::{build_reader_input, extract_span, EchoReader, OracleReader, SpanAnswer};
use zeqr::retrieval::{bm25_search, build_index, format_run, Analyzer, Bm25Params, RunResult, ScoredDoc};
use zeqr::{make_coref_question, make_omission_question, Config, DialogueContext, Mode, PostmodifierRule, Reformulator, Turn};

const Q4: &str = "Wow, that is better than I thought.  What are common treatments?";
const Q4_STAR: &str = "Wow, Lobular Neoplasia is better than I thought.  What are common treatments?";
const Q4_DOUBLE_STAR: &str =
    "Wow, Lobular Neoplasia is better than I thought.  What are common treatments of Lobular Carcinoma in Situ?";

fn background_idf(extra_common: &[&str]) -> IdfTable {
    let common = [
        "wow", "that", "is", "better", "than", "i", "thought", "what", "are", "common", "the", "most", "main",
        "economic", "eu", "with", "needed", "how", "likely", "it", "to", "much", "does", "cost", "and", "types",
    ];
    IdfTable::from_document_frequencies(
        1000,
        common.iter().chain(extra_common).map(|w| (w.to_string(), 300)),
    )
}

fn biopsy_context() -> DialogueContext {
    DialogueContext {
        prior_queries: vec![
            "I just had a breast biopsy for cancer. What are the most common types?".into(),
            "Once it breaks out, how likely is it to spread?".into(),
            "How deadly is Lobular Carcinoma in Situ?".into(),
        ],
        latest_answer: Some("In this case it will be described as Lobular Neoplasia.".into()),
        truncated: false,
    }
}

fn reformulator(pairs: &[(&str, &str)], mode: Mode, rule: PostmodifierRule) -> Reformulator {
    let oracle = OracleReader::new(pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())));
    Reformulator::new(Arc::new(oracle), Config { mode, postmodifier_rule: rule, ..Config::default() })
}

fn context_with(prior: &[&str], answer: &str) -> DialogueContext {
    DialogueContext {
        prior_queries: prior.iter().map(|s| s.to_string()).collect(),
        latest_answer: Some(answer.to_string()),
        truncated: false,
    }
}

// 1
fn template_fidelity() {
    assert_eq!(
        make_coref_question("that", Q4),
        "What is that refer to, in \"Wow, that is better than I thought.  What are common treatments?\""
    );
    assert_eq!(
        make_omission_question("treatments", OmissionKind::Noun, Q4_STAR),
        "treatments of what, in \"Wow, Lobular Neoplasia is better than I thought.  What are common treatments?\""
    );
    assert_eq!(
        make_omission_question("spread", OmissionKind::Verb, "Once it breaks out, how likely is it to spread?"),
        "spread to what, in \"Once it breaks out, how likely is it to spread?\""
    );
}

// 2
fn biopsy_end_to_end() {
    let r = reformulator(
        &[("What is that refer to", "Lobular Neoplasia"), ("treatments of what", "Lobular Carcinoma in Situ")],
        Mode::Full,
        PostmodifierRule::Strict,
    );
    let trace = r.reformulate(&Turn::new(4, Q4), &biopsy_context(), &background_idf(&[])).unwrap();
    assert_eq!(trace.q_star, Q4_STAR);
    assert_eq!(trace.q_double_star, Q4_DOUBLE_STAR);
}

// 3
fn rewrite_fixtures() {
    struct Row {
        raw: &'static str,
        context: DialogueContext,
        oracle: &'static [(&'static str, &'static str)],
        expect: &'static str,
    }
    let rows = [
        Row {
            raw: "What is the difference with Bologna?",
            context: context_with(&["What is mortadella?"], "Mortadella is a large Italian sausage from Bologna."),
            oracle: &[("difference of what", "mortadella")],
            expect: "difference of mortadella",
        },
        Row {
            raw: "What are the EU rules?",
            context: context_with(
                &["How is GMO Food labeling regulated?"],
                "GMO Food labeling is mandatory in the EU for products above a threshold.",
            ),
            oracle: &[("rules of what", "GMO Food labeling")],
            expect: "EU rules of GMO Food labeling",
        },
        Row {
            raw: "What licenses and permits are needed?",
            context: context_with(&["How do I start a food truck business?"], "Start with a business plan."),
            oracle: &[("permits of what", "food truck")],
            expect: "licenses and permits of food truck",
        },
        Row {
            raw: "What is its main economic activity?",
            context: context_with(&["Tell me about Salt Lake City."], "Salt Lake City is the capital of Utah."),
            oracle: &[("What is its refer to", "Salt Lake City"), ("activity of what", "Salt Lake City")],
            expect: "Salt Lake City",
        },
    ];
    let idf = background_idf(&[]);
    for row in rows {
        let r = reformulator(row.oracle, Mode::Full, PostmodifierRule::Lenient);
        let trace = r.reformulate(&Turn::new(2, row.raw), &row.context, &idf).unwrap();
        assert!(
            trace.q_double_star.contains(row.expect),
            "`{}` became `{}`, expected to contain `{}`",
            row.raw,
            trace.q_double_star,
            row.expect
        );
    }
}

// 4
fn order_property() {
    let raw = "That is better than I thought. What are common ones?";
    let context = context_with(
        &[
            "I just had a breast biopsy for cancer. What are the most common types?",
            "How deadly is Lobular Carcinoma in Situ?",
        ],
        "In this case it will be described as Lobular Neoplasia, and there are several treatments.",
    );
    let oracle: &[(&str, &str)] = &[
        ("What is That refer to", "Lobular Neoplasia"),
        ("What is ones refer to", "treatments"),
        ("treatments of what", "Lobular Carcinoma in Situ"),
    ];
    let idf = background_idf(&[]);
    let turn = Turn::new(3, raw);

    let full = reformulator(oracle, Mode::Full, PostmodifierRule::Strict);
    let trace = full.reformulate(&turn, &context, &idf).unwrap();
    assert_eq!(
        trace.q_double_star,
        "Lobular Neoplasia is better than I thought. What are common treatments of Lobular Carcinoma in Situ?"
    );
    assert!(trace.coref_steps.iter().filter(|s| s.applied).count() == 2);
    assert!(trace.omission_steps.iter().any(|s| s.applied));

    // omission first, then coreference
    let (after_omission, omission_steps) = full.resolve_omission(raw, &context, &idf).unwrap();
    assert!(omission_steps.iter().all(|s| !s.applied));
    let (reversed, _) = full.resolve_coreference(&after_omission, &context).unwrap();
    assert_eq!(reversed, "Lobular Neoplasia is better than I thought. What are common treatments?");
    assert!(!reversed.contains("Lobular Carcinoma in Situ"));

    let omission_only = reformulator(oracle, Mode::OmissionOnly, PostmodifierRule::Strict);
    let trace_o = omission_only.reformulate(&turn, &context, &idf).unwrap();
    assert_eq!(trace_o.q_double_star, raw);

    // In every full-mode run the omission questions quote q*, which only
    // exists once coreference has finished.
    let mini = common::Mini::load();
    let mut traces = mini.run(Mode::Full).traces;
    traces.push(trace);
    for t in &traces {
        let quoted = format!("in \"{}\"", t.q_star);
        for step in &t.omission_steps {
            assert!(step.question.ends_with(&quoted), "{} does not quote q*", step.question);
        }
        for step in &t.coref_steps {
            assert!(step.question.ends_with(&format!("in \"{}\"", t.raw_query)));
        }
        let json = serde_json::to_string(t).unwrap();
        assert!(json.find("\"coref_steps\"").unwrap() < json.find("\"omission_steps\"").unwrap());
    }
}

// 5
fn bm25_oracle() {
    let mut rng = StdRng::seed_from_u64(5);
    let vocab: Vec<String> = (0..60).map(|i| format!("w{i}")).collect();
    let docs: Vec<Document> = (0..200)
        .map(|i| {
            let len = rng.random_range(3..40);
            let words: Vec<&str> = (0..len)
                .map(|_| {
                    // skewed draw so some terms are frequent and some rare
                    let r: f64 = rng.random();
                    vocab[((r * r) * vocab.len() as f64) as usize].as_str()
                })
                .collect();
            Document::new(format!("d{i:03}"), words.join(" "))
        })
        .collect();
    let index = build_index(&docs, Analyzer::default()).unwrap();
    let params = Bm25Params::default();

    let bags: Vec<HashMap<&str, usize>> = docs
        .iter()
        .map(|d| {
            let mut m = HashMap::new();
            for w in d.body.split_whitespace() {
                *m.entry(w).or_insert(0) += 1;
            }
            m
        })
        .collect();
    let lens: Vec<f64> = docs.iter().map(|d| d.body.split_whitespace().count() as f64).collect();
    let avgdl = lens.iter().sum::<f64>() / lens.len() as f64;
    let n = docs.len() as f64;

    for _ in 0..50 {
        let qlen = rng.random_range(1..6);
        let query: Vec<&str> = (0..qlen).map(|_| vocab[rng.random_range(0..vocab.len() + 5).min(vocab.len() - 1)].as_str()).collect();
        let query = query.join(" ");

        let mut expected: Vec<(String, f64)> = Vec::new();
        for (i, bag) in bags.iter().enumerate() {
            let mut score = 0.0;
            let mut matched = false;
            for term in query.split_whitespace() {
                let tf = *bag.get(term).unwrap_or(&0) as f64;
                if tf == 0.0 {
                    continue;
                }
                matched = true;
                let df = bags.iter().filter(|b| b.contains_key(term)).count() as f64;
                let idf = (1.0 + (n - df + 0.5) / (df + 0.5)).ln();
                let norm = params.k1 * (1.0 - params.b + params.b * lens[i] / avgdl);
                score += idf * tf * (params.k1 + 1.0) / (tf + norm);
            }
            if matched {
                expected.push((docs[i].doc_id.clone(), score));
            }
        }
        expected.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));

        let got = bm25_search(&index, &query, docs.len(), params).unwrap();
        assert_eq!(got.len(), expected.len(), "query `{query}`");
        for (g, (id, s)) in got.iter().zip(&expected) {
            assert!((g.score - s).abs() < 1e-6, "query `{query}`: {} {} vs {id} {s}", g.doc_id, g.score);
        }
        // rankings must agree exactly once near-equal scores are tie-broken by id
        let mut regrouped = got.clone();
        regrouped.sort_by(|a, b| {
            if (a.score - b.score).abs() < 1e-9 {
                a.doc_id.cmp(&b.doc_id)
            } else {
                b.score.partial_cmp(&a.score).unwrap()
            }
        });
        let got_ids: Vec<&str> = regrouped.iter().map(|d| d.doc_id.as_str()).collect();
        let want_ids: Vec<&str> = expected.iter().map(|(id, _)| id.as_str()).collect();
        assert_eq!(got_ids, want_ids, "query `{query}`");
        assert_eq!(got.iter().map(|d| d.doc_id.as_str()).collect::<Vec<_>>(), want_ids);
    }
}

fn brute_force_metrics(ranked: &[&str], judgments: &BTreeMap<String, u32>, cutoff: u32) -> Option<[f64; 4]> {
    let grade = |d: &str| judgments.get(d).copied().unwrap_or(0);
    let relevant = judgments.values().filter(|&&g| g >= cutoff).count();
    if relevant == 0 {
        return None;
    }
    let dcg: f64 = ranked.iter().take(5).enumerate().map(|(i, d)| grade(d) as f64 / ((i + 2) as f64).log2()).sum();
    let mut ideal: Vec<u32> = judgments.values().copied().collect();
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    let idcg: f64 = ideal.iter().take(5).enumerate().map(|(i, &g)| g as f64 / ((i + 2) as f64).log2()).sum();
    let ndcg = if idcg > 0.0 { dcg / idcg } else { 0.0 };
    let p5 = ranked.iter().take(5).filter(|d| grade(d) >= cutoff).count() as f64 / 5.0;
    let r100 = ranked.iter().take(100).filter(|d| grade(d) >= cutoff).count() as f64 / relevant as f64;
    let mut hits = 0.0;
    let mut sum = 0.0;
    for (i, d) in ranked.iter().enumerate() {
        if grade(d) >= cutoff {
            hits += 1.0;
            sum += hits / (i + 1) as f64;
        }
    }
    Some([ndcg, p5, r100, sum / relevant as f64])
}

fn run_of(query_id: &str, docs: &[&str]) -> RunResult {
    let n = docs.len();
    RunResult::new(
        query_id,
        docs.iter().enumerate().map(|(i, d)| ScoredDoc::new(*d, (n - i) as f64)).collect(),
        "t",
    )
}

// 6
fn metric_oracle() {
    let mut qrels = Qrels::new();
    qrels.insert("q1", "d1", 3);
    qrels.insert("q1", "d2", 1);
    qrels.insert("q2", "a", 1);
    qrels.insert("q2", "b", 0);
    qrels.insert("q2", "c", 2);
    qrels.insert("q3", "z", 1);
    let run = vec![run_of("q1", &["d2", "d1"]), run_of("q2", &["x", "a", "y", "c"]), run_of("q3", &["p", "q"])];
    let report = evaluate_run(&run, &qrels, 1);
    let expected = [
        ("q1", [0.7967075809905066, 0.4, 1.0, 1.0]),
        ("q2", [0.5672074169568709, 0.4, 1.0, 0.5]),
        ("q3", [0.0, 0.0, 0.0, 0.0]),
    ];
    for (q, want) in expected {
        let got = report.per_query[q].values();
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-6, "{q}: {got:?} vs {want:?}");
        }
    }
    let means = report.means.unwrap().values();
    assert!((means[0] - (0.7967075809905066 + 0.5672074169568709) / 3.0).abs() < 1e-6);

    let mut rng = StdRng::seed_from_u64(6);
    let pool: Vec<String> = (0..30).map(|i| format!("doc{i}")).collect();
    for case in 0..100 {
        let mut qrels = Qrels::new();
        let mut runs = Vec::new();
        let cutoff = rng.random_range(1..3);
        for q in 0..rng.random_range(1..5) {
            let qid = format!("c{case}q{q}");
            let mut judged = pool.clone();
            judged.shuffle(&mut rng);
            judged.truncate(rng.random_range(0..10));
            for d in judged {
                qrels.insert(qid.clone(), d, rng.random_range(0..4));
            }
            let mut docs: Vec<&str> = pool.iter().map(String::as_str).collect();
            docs.shuffle(&mut rng);
            docs.truncate(rng.random_range(0..pool.len()));
            runs.push(run_of(&qid, &docs));
        }
        let report = evaluate_run(&runs, &qrels, cutoff);
        for r in &runs {
            let ranked: Vec<&str> = r.doc_ids().collect();
            let want = qrels.for_query(&r.query_id).and_then(|j| brute_force_metrics(&ranked, j, cutoff));
            match (report.per_query.get(&r.query_id), want) {
                (Some(got), Some(want)) => {
                    for (g, w) in got.values().iter().zip(want) {
                        assert!((g - w).abs() < 1e-6, "case {case} {}: {g} vs {w}", r.query_id);
                    }
                }
                (None, None) => {}
                (got, want) => panic!("case {case} {}: {got:?} vs {want:?}", r.query_id),
            }
        }
    }
}

// 7
fn ablation_direction() {
    let mini = common::Mini::load();
    assert_eq!(mini.collection.len(), 20);
    assert_eq!(mini.sessions.len(), 2);
    assert_eq!(mini.sessions.iter().map(|s| s.turns.len()).sum::<usize>(), 8);
    let ndcg = |mode| {
        let report = mini.evaluate(mode);
        assert_eq!(report.num_queries, 8, "{mode}");
        report.means.unwrap().ndcg_at_5
    };
    let full = ndcg(Mode::Full);
    let coref = ndcg(Mode::CorefOnly);
    let omission = ndcg(Mode::OmissionOnly);
    let pass = ndcg(Mode::Passthrough);
    println!("    ndcg@5 full={full:.4} coref_only={coref:.4} omission_only={omission:.4} passthrough={pass:.4}");
    assert!(full >= omission && omission >= pass);
    assert!(full >= coref && coref >= pass);
    assert!(full > pass);
    // frozen after rescoring every arm with a separate BM25 and NDCG script
    for (got, want) in [(full, 0.874309), (coref, 0.785456), (omission, 0.784303), (pass, 0.681706)] {
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
    }
}

// 8
fn significance() {
    let a = [2.0, 3.0, 4.0, 5.0, 6.0];
    let b = [1.0; 5];
    let r = paired_t_test(&a, &b).unwrap();
    assert!((r.t_statistic - 4.2426).abs() < 1e-3, "{r:?}");
    assert!((r.p_value - 0.0132).abs() < 1e-3, "{r:?}");
    let s = paired_t_test(&b, &a).unwrap();
    assert!((s.t_statistic + r.t_statistic).abs() < 1e-12);
    assert!((s.p_value - r.p_value).abs() < 1e-12);
    let same = paired_t_test(&a, &a).unwrap();
    assert_eq!(same.t_statistic, 0.0);
    assert_eq!(same.p_value, 1.0);
}

// 9
fn census() {
    let mini = common::Mini::load();
    let census = ambiguity_census(
        &mini.sessions,
        &mini.idf,
        &Config::default(),
        &RuleTagger,
        &PronounInventory::default(),
    );
    // (coreference, omission) read off the raw utterances by hand
    let annotated = [
        (("81", 1), (false, true)),
        (("81", 2), (true, true)),
        (("81", 3), (false, false)),
        (("81", 4), (true, true)),
        (("82", 1), (false, false)),
        (("82", 2), (false, true)),
        (("82", 3), (true, false)),
        (("82", 4), (false, true)),
    ];
    for ((session, turn), (coref, omission)) in annotated {
        let flags = census.per_turn[&(session.to_string(), turn)];
        assert_eq!((flags.has_coref, flags.has_omission), (coref, omission), "{session}_{turn}");
    }
    assert_eq!(census.coreference_count, 3);
    assert_eq!(census.omission_count, 5);
    let tsv = census.to_tsv();
    assert!(tsv.ends_with("Coreference\t3\nOmission\t5\n"), "{tsv}");
}

/// Runs one property with a fresh runner and panics with the shrunk input.
fn property<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>)
where
    S::Value: std::fmt::Debug,
{
    let config = PropConfig { cases: 128, failure_persistence: None, ..PropConfig::default() };
    if let Err(e) = TestRunner::new(config).run(&strategy, test) {
        panic!("{name}: {e}");
    }
}

// 10
fn invariants() {
    let text = "[a-zA-Z0-9 ,.?!'é-]{0,60}";

    property("tokenizer offsets", &text, |s| {
        for t in tokenize(&s) {
            prop_assert_eq!(char_slice(&s, t.char_start, t.char_end), Some(t.text.as_str()));
        }
        for t in tokenize_and_tag(&s) {
            prop_assert_eq!(char_slice(&s, t.char_start, t.char_end), Some(t.text.as_str()));
        }
        Ok(())
    });

    property("reader offsets", &("[a-z][a-z ]{0,19}", "[a-zé ]{1,80}", 0usize..80, 1usize..10), |(q, ctx, start, len)| {
        let context = DialogueContext { prior_queries: vec![], latest_answer: Some(ctx.clone()), truncated: false };
        let input = build_reader_input(&q, &context, &Config::default()).unwrap();
        let span = extract_span(&EchoReader, &input);
        if let Ok(span) = span {
            prop_assert_eq!(char_slice(&input.context, span.char_start, span.char_end), Some(span.text.as_str()));
        }
        let chars: Vec<char> = ctx.chars().collect();
        let start = start.min(chars.len());
        let end = (start + len).min(chars.len());
        let piece: String = chars[start..end].iter().collect();
        if !piece.trim().is_empty() {
            let located = SpanAnswer::locate(&ctx, &piece, 1.0).unwrap();
            prop_assert_eq!(char_slice(&ctx, located.char_start, located.char_end), Some(located.text.as_str()));
        }
        Ok(())
    });

    // whatever the oracle returns, only context substrings reach the query
    let words = prop::sample::select(vec!["it", "that", "rules", "treatments", "spread", "licenses", "the", "is", "what", "cost"]);
    property("extractive containment", 
        &(prop::collection::vec(words, 1..8), "[a-zA-Z ]{5,60}", prop::collection::vec("[a-zA-Z ]{1,12}", 1..4)),
        |(qwords, ctx, answers)| {
            let query = format!("{}?", qwords.join(" "));
            let context = DialogueContext { prior_queries: vec![], latest_answer: Some(ctx.clone()), truncated: false };
            let pairs: Vec<(String, String)> = ["What is", "rules of", "treatments of", "spread to", "cost to"]
                .iter()
                .zip(answers.iter().cycle())
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect();
            let r = Reformulator::new(Arc::new(OracleReader::new(pairs)), Config::default());
            let trace = r.reformulate(&Turn::new(2, query), &context, &background_idf(&[])).unwrap();
            let serialized = context.serialize();
            for a in trace.coref_steps.iter().filter(|s| s.applied).filter_map(|s| s.answer.as_ref()) {
                prop_assert!(serialized.contains(&a.text));
                prop_assert!(trace.q_star.contains(&a.text));
            }
            for a in trace.omission_steps.iter().filter(|s| s.applied).filter_map(|s| s.answer.as_ref()) {
                prop_assert!(serialized.contains(&a.text));
                prop_assert!(trace.q_double_star.contains(&a.text));
            }
            Ok(())
        },
    );

    let mini = common::Mini::load();
    property("threshold monotonicity", &(0.0f64..5.0, 0.0f64..2.0), |(low, delta)| {
        let high = low + delta;
        let config_at = |t: f64| Config { idf_threshold: t, premodifier_idf_threshold: 2.65, ..Config::default() };
        for s in &mini.sessions {
            for turn in &s.turns {
                let tokens = tokenize_and_tag(&turn.raw_query);
                let at = |t| {
                    find_omission_candidates(&tokens, &mini.idf, &OmissionRules::from_config(&config_at(t)))
                        .into_iter()
                        .map(|c| c.token_index)
                        .collect::<Vec<_>>()
                };
                let (lo, hi) = (at(low), at(high));
                prop_assert!(hi.iter().all(|i| lo.contains(i)));
            }
        }
        let count = |t| {
            ambiguity_census(&mini.sessions, &mini.idf, &config_at(t), &RuleTagger, &PronounInventory::default())
                .omission_count
        };
        prop_assert!(count(high) <= count(low));
        Ok(())
    });

    property("metric bounds and NDCG optimality", &(prop::collection::vec(0u32..4, 1..7), 1u32..3), |(grades, cutoff)| {
        let judgments: BTreeMap<String, u32> =
            grades.iter().enumerate().map(|(i, g)| (format!("d{i}"), *g)).collect();
        let ids: Vec<String> = judgments.keys().cloned().collect();
        let mut ideal: Vec<&str> = ids.iter().map(String::as_str).collect();
        ideal.sort_by_key(|d| std::cmp::Reverse(judgments[*d]));
        let best = score_query(&ideal, &judgments, cutoff).map(|m| m.ndcg_at_5);
        for perm in permutations(&ids) {
            let ranked: Vec<&str> = perm.iter().map(String::as_str).collect();
            if let Some(m) = score_query(&ranked, &judgments, cutoff) {
                for v in m.values() {
                    prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
                }
                prop_assert!(m.ndcg_at_5 <= best.unwrap() + 1e-12);
            }
        }
        if let (true, Some(best)) = (judgments.values().any(|&g| g > 0), best) {
            prop_assert!((best - 1.0).abs() < 1e-12);
        }
        Ok(())
    });

    let render = || {
        let out = mini.run(Mode::Full);
        let report = evaluate_run(&out.results, &mini.qrels, 1);
        (format_run(&out.results), report.to_tsv())
    };
    assert_eq!(render(), render(), "run and eval output differ between identical runs");
}

fn permutations(items: &[String]) -> Vec<Vec<String>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn(), Duration); 10] = [
        ("1 template fidelity", template_fidelity, Duration::from_secs(1)),
        ("2 biopsy session end to end", biopsy_end_to_end, Duration::from_secs(1)),
        ("3 rewrite fixtures", rewrite_fixtures, Duration::from_secs(1)),
        ("4 resolution order", order_property, Duration::from_secs(1)),
        ("5 bm25 oracle equivalence", bm25_oracle, Duration::from_secs(30)),
        ("6 metric oracle equivalence", metric_oracle, Duration::from_secs(30)),
        ("7 ablation direction", ablation_direction, Duration::from_secs(60)),
        ("8 significance", significance, Duration::from_secs(1)),
        ("9 census", census, Duration::from_secs(60)),
        ("10 invariant suites", invariants, Duration::from_secs(300)),
    ];
    let mut failed = Vec::new();
    for (name, f, limit) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f));
        let elapsed = started.elapsed();
        let ok = outcome.is_ok() && elapsed <= limit;
        println!(
            "{} criterion {name} ({:.3}s, limit {}s)",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        if !ok {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
