mod common;

use std::sync::Arc;

use serde_json::json;
use zeqr::linguistics::char_slice;
use zeqr::pipeline::run_sessions;
use zeqr::reader::{
    build_reader_input, extract_span, ChatCompletionsGenerator, GenerativeReader, Reader, ReaderError, RemoteReader,
};
use zeqr::retrieval::{bm25_search, Bm25Params, ExternalRetriever, Retriever};
use zeqr::{Config, DialogueContext, Error, Mode, Reformulator};

use common::stub::{dead_url, fast_policy, Stub};

fn context() -> DialogueContext {
    DialogueContext {
        prior_queries: vec!["Tell me about Salt Lake City.".into()],
        latest_answer: Some("Salt Lake City is the capital of Utah.".into()),
        truncated: false,
    }
}

/// Answers with the first occurrence of `needle` in the posted context.
fn span_of(body: &serde_json::Value, needle: &str) -> String {
    let ctx = body["context"].as_str().unwrap();
    let byte = ctx.find(needle).unwrap();
    let start = ctx[..byte].chars().count();
    json!({"answer": needle, "start": start, "end": start + needle.chars().count(), "score": 0.9}).to_string()
}

#[test]
fn remote_reader_returns_span() {
    let stub = Stub::start(|r| {
        assert_eq!(r.path, "/extract");
        assert!(r.body["question"].as_str().unwrap().starts_with("What is its refer to"));
        (200, span_of(&r.body, "Salt Lake City"))
    });
    let reader = RemoteReader::new(&stub.url, fast_policy());
    let input = build_reader_input("What is its refer to, in \"What is its main economic activity?\"", &context(), &Config::default()).unwrap();
    let span = extract_span(&reader, &input).unwrap();
    assert_eq!(span.text, "Salt Lake City");
    assert_eq!(char_slice(&input.context, span.char_start, span.char_end), Some("Salt Lake City"));
    assert_eq!(stub.hits(), 1);
}

#[test]
fn remote_reader_retries_server_errors() {
    let calls = std::sync::atomic::AtomicUsize::new(0);
    let stub = Stub::start(move |r| {
        if calls.fetch_add(1, std::sync::atomic::Ordering::SeqCst) == 0 {
            (503, "busy".into())
        } else {
            (200, span_of(&r.body, "Utah"))
        }
    });
    let reader = RemoteReader::new(&stub.url, fast_policy());
    let input = build_reader_input("Where?", &context(), &Config::default()).unwrap();
    assert_eq!(extract_span(&reader, &input).unwrap().text, "Utah");
    assert_eq!(stub.hits(), 2);
}

#[test]
fn remote_reader_gives_up_after_retries() {
    let stub = Stub::start(|_| (500, "down".into()));
    let reader = RemoteReader::new(&stub.url, fast_policy());
    let input = build_reader_input("Where?", &context(), &Config::default()).unwrap();
    match reader.answer(&input) {
        Err(ReaderError::Transport { attempts, endpoint, .. }) => {
            assert_eq!(attempts, 3);
            assert!(endpoint.ends_with("/extract"));
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(stub.hits(), 3);
}

#[test]
fn unreachable_reader_is_a_transport_error() {
    let reader = RemoteReader::new(&dead_url(), fast_policy());
    let input = build_reader_input("Where?", &context(), &Config::default()).unwrap();
    assert!(matches!(reader.answer(&input), Err(ReaderError::Transport { attempts: 3, .. })));
}

#[test]
fn client_errors_are_not_retried() {
    let stub = Stub::start(|_| (400, "bad request".into()));
    let reader = RemoteReader::new(&stub.url, fast_policy());
    let input = build_reader_input("Where?", &context(), &Config::default()).unwrap();
    assert!(matches!(reader.answer(&input), Err(ReaderError::Protocol(_))));
    assert_eq!(stub.hits(), 1);
}

#[test]
fn malformed_reader_responses_are_protocol_errors() {
    let stub = Stub::start(|_| (200, "{\"answer\": 3}".into()));
    let reader = RemoteReader::new(&stub.url, fast_policy());
    let input = build_reader_input("Where?", &context(), &Config::default()).unwrap();
    assert!(matches!(reader.answer(&input), Err(ReaderError::Protocol(_))));

    // well-formed JSON whose offsets point at the wrong text
    let stub = Stub::start(|_| (200, json!({"answer": "Utah", "start": 0, "end": 4, "score": 1.0}).to_string()));
    let reader = RemoteReader::new(&stub.url, fast_policy());
    assert!(matches!(extract_span(&reader, &input), Err(ReaderError::Protocol(_))));
}

#[test]
fn chat_generator_answers_extractively() {
    let stub = Stub::start(|r| {
        assert_eq!(r.path, "/chat/completions");
        assert_eq!(r.authorization.as_deref(), Some("Bearer secret"));
        assert_eq!(r.body["model"], "tiny");
        let prompt = r.body["messages"][0]["content"].as_str().unwrap();
        assert!(prompt.contains("Salt Lake City is the capital of Utah."));
        (200, json!({"choices": [{"message": {"role": "assistant", "content": "Answer: \"Utah.\""}}]}).to_string())
    });
    let generator = ChatCompletionsGenerator::new(&stub.url, "tiny", Some("secret".into()), fast_policy());
    let reader = GenerativeReader::new("chat", generator);
    let input = build_reader_input("Capital of what?", &context(), &Config::default()).unwrap();
    let span = extract_span(&reader, &input).unwrap();
    assert_eq!(span.text, "Utah");
}

#[test]
fn chat_generator_rejects_invented_answers() {
    let stub = Stub::start(|_| (200, json!({"choices": [{"message": {"content": "Denver"}}]}).to_string()));
    let reader = GenerativeReader::new("chat", ChatCompletionsGenerator::new(&stub.url, "tiny", None, fast_policy()));
    let input = build_reader_input("Capital of what?", &context(), &Config::default()).unwrap();
    assert!(matches!(reader.answer(&input), Err(ReaderError::NonExtractive { .. })));
}

#[test]
fn external_retriever_matches_local_bm25() {
    let mini = common::Mini::load();
    let index = Arc::new(zeqr::build_index(&mini.collection, Default::default()).unwrap());
    let served = index.clone();
    let stub = Stub::start(move |r| {
        assert_eq!(r.path, "/search");
        let hits = bm25_search(
            &served,
            r.body["query"].as_str().unwrap(),
            r.body["k"].as_u64().unwrap() as usize,
            Bm25Params::default(),
        )
        .unwrap();
        (200, json!({ "hits": hits }).to_string())
    });
    let remote = ExternalRetriever::new(&stub.url, fast_policy());
    for session in &mini.sessions {
        for turn in &session.turns {
            let direct = bm25_search(&index, &turn.raw_query, 10, Bm25Params::default()).unwrap();
            assert_eq!(remote.search(&turn.raw_query, 10).unwrap(), direct);
        }
    }
}

#[test]
fn external_retriever_validates_rankings() {
    let stub = Stub::start(|_| {
        (200, json!({"hits": [{"doc_id": "a", "score": 1.0}, {"doc_id": "b", "score": 2.0}]}).to_string())
    });
    let remote = ExternalRetriever::new(&stub.url, fast_policy());
    assert!(matches!(remote.search("x", 5), Err(Error::Protocol(_))));

    let stub = Stub::start(|_| {
        (200, json!({"hits": [{"doc_id": "a", "score": 2.0}, {"doc_id": "a", "score": 1.0}]}).to_string())
    });
    let remote = ExternalRetriever::new(&stub.url, fast_policy());
    assert!(matches!(remote.search("x", 5), Err(Error::Protocol(_))));

    let stub = Stub::start(|_| (200, json!({"hits": [{"doc_id": "a", "score": 2.0}]}).to_string()));
    let remote = ExternalRetriever::new(&stub.url, fast_policy());
    assert!(matches!(remote.search("x", 0), Err(Error::Precondition(_))));
    assert_eq!(stub.hits(), 0);
}

#[test]
fn unreachable_retriever_names_the_endpoint() {
    let url = dead_url();
    let remote = ExternalRetriever::new(&url, fast_policy());
    match remote.search("x", 5) {
        Err(Error::Retrieval { endpoint, .. }) => assert_eq!(endpoint, format!("{url}/search")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn reader_outage_fails_only_the_affected_turns() {
    // the service is down for questions about cost and unsure about the rest
    let stub = Stub::start(|r| {
        let q = r.body["question"].as_str().unwrap();
        if q.contains("cost") {
            (500, "down".into())
        } else {
            let first = r.body["context"].as_str().unwrap().split(' ').next().unwrap().to_string();
            let end = first.chars().count();
            (200, json!({"answer": first, "start": 0, "end": end, "score": 0.1}).to_string())
        }
    });
    let mini = common::Mini::load();
    let reader: Arc<dyn Reader> = Arc::new(RemoteReader::new(&stub.url, fast_policy()));
    let config = Config { mode: Mode::Full, min_answer_score: 0.5, ..Config::default() };
    let reformulator = Reformulator::new(reader, config);
    let out = run_sessions(&mini.sessions, &reformulator, &mini.idf, &mini.retriever, 10, "t");
    assert_eq!(out.total_turns, 8);
    assert_eq!(out.failures.len(), 1, "{:?}", out.failures);
    assert_eq!(out.failures[0].query_id, "82_3");
    assert_eq!(out.results.len(), 7);
    let partial = out.traces.iter().find(|t| t.query_id.as_deref() == Some("82_3")).unwrap();
    assert_eq!(partial.q_double_star, "How much does it cost?");
}
