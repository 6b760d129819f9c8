use serde::{Deserialize, Serialize};

use super::run::{validate_ranking, ScoredDoc};
use super::Retriever;
use crate::error::{Error, Result};
use crate::http::{HttpError, JsonClient, RetryPolicy};

#[derive(Debug, Serialize, Deserialize)]
pub struct SearchRequest {
    pub query: String,
    pub k: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SearchResponse {
    pub hits: Vec<ScoredDoc>,
}

/// Delegates ranking to a service speaking `POST /search`:
/// `{"query", "k"}` in, `{"hits": [{"doc_id", "score"}]}` out.
pub struct ExternalRetriever {
    client: JsonClient,
}

impl ExternalRetriever {
    pub fn new(base_url: &str, policy: RetryPolicy) -> Self {
        let url = format!("{}/search", base_url.trim_end_matches('/'));
        ExternalRetriever {
            client: JsonClient::new(url, policy),
        }
    }

    pub fn endpoint(&self) -> &str {
        self.client.url()
    }
}

impl Retriever for ExternalRetriever {
    fn search(&self, query: &str, k: usize) -> Result<Vec<ScoredDoc>> {
        external_search(self, query, k)
    }
}

pub fn external_search(retriever: &ExternalRetriever, query: &str, k: usize) -> Result<Vec<ScoredDoc>> {
    if k < 1 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let endpoint = retriever.endpoint().to_string();
    let request = SearchRequest {
        query: query.to_string(),
        k,
    };
    let response: SearchResponse = retriever.client.post(&request).map_err(|e| match e {
        HttpError::Transport { attempts, message } => Error::Retrieval {
            endpoint: endpoint.clone(),
            message: format!("{message} (after {attempts} attempt(s))"),
        },
        HttpError::Status { code, body } => Error::Protocol(format!("{endpoint} answered HTTP {code}: {body}")),
        HttpError::Decode(msg) => Error::Protocol(format!("{endpoint} sent a malformed response: {msg}")),
    })?;
    validate_ranking(&response.hits, Some(k)).map_err(|msg| Error::Protocol(format!("{endpoint}: {msg}")))?;
    Ok(response.hits)
}
