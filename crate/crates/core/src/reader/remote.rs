use serde::{Deserialize, Serialize};

use super::{Reader, ReaderError, ReaderInput, SpanAnswer};
use crate::http::{HttpError, JsonClient};
pub use crate::http::RetryPolicy;

#[derive(Serialize)]
struct ExtractRequest<'a> {
    question: &'a str,
    context: &'a str,
}

#[derive(Deserialize)]
struct ExtractResponse {
    answer: String,
    start: usize,
    end: usize,
    score: f64,
}

/// Client for a reader service speaking `POST /extract`:
/// `{"question", "context"}` in, `{"answer", "start", "end", "score"}` out,
/// offsets in code points over the request's context.
pub struct RemoteReader {
    client: JsonClient,
}

impl RemoteReader {
    /// `base_url` is the service root; `/extract` is appended.
    pub fn new(base_url: &str, policy: RetryPolicy) -> Self {
        let url = format!("{}/extract", base_url.trim_end_matches('/'));
        RemoteReader {
            client: JsonClient::new(url, policy),
        }
    }
}

impl Reader for RemoteReader {
    fn name(&self) -> &str {
        self.client.url()
    }

    fn answer(&self, input: &ReaderInput) -> Result<SpanAnswer, ReaderError> {
        let request = ExtractRequest {
            question: &input.question,
            context: &input.context,
        };
        let response: ExtractResponse = self.client.post(&request).map_err(|e| match e {
            HttpError::Transport { attempts, message } => ReaderError::Transport {
                endpoint: self.client.url().to_string(),
                attempts,
                message,
            },
            HttpError::Status { code, body } => ReaderError::Protocol(format!("HTTP {code}: {body}")),
            HttpError::Decode(msg) => ReaderError::Protocol(format!("malformed response: {msg}")),
        })?;
        Ok(SpanAnswer {
            text: response.answer,
            char_start: response.start,
            char_end: response.end,
            score: response.score,
        })
    }
}
