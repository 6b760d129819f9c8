use serde::{Deserialize, Serialize};

use super::{Reader, ReaderError, ReaderInput, SpanAnswer};
use crate::http::{HttpError, JsonClient, RetryPolicy};

/// Prompt preamble asking a generator to behave extractively.
pub const EXTRACTIVE_INSTRUCTION: &str = "Answer the question by copying one contiguous span of the context \
exactly as it appears. Do not paraphrase, explain, or add any other text. Reply with the span only.";

/// Free-text generator behind a [`GenerativeReader`].
pub trait Generator: Send + Sync {
    fn generate(&self, prompt: &str) -> Result<String, ReaderError>;
}

impl<F> Generator for F
where
    F: Fn(&str) -> Result<String, ReaderError> + Send + Sync,
{
    fn generate(&self, prompt: &str) -> Result<String, ReaderError> {
        self(prompt)
    }
}

/// Adapts a generator to the extractive contract: the output must occur
/// verbatim in the context, otherwise the answer is rejected.
pub struct GenerativeReader<G> {
    generator: G,
    name: String,
}

impl<G: Generator> GenerativeReader<G> {
    pub fn new(name: impl Into<String>, generator: G) -> Self {
        GenerativeReader {
            generator,
            name: name.into(),
        }
    }

    pub fn prompt(input: &ReaderInput) -> String {
        format!(
            "{EXTRACTIVE_INSTRUCTION}\n\nContext: {}\n\nQuestion: {}\n\nAnswer:",
            input.context, input.question
        )
    }
}

fn clean(output: &str) -> &str {
    let trimmed = output.trim();
    let trimmed = trimmed.strip_prefix("Answer:").map_or(trimmed, str::trim);
    let unquoted = trimmed
        .strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .unwrap_or(trimmed);
    unquoted.trim()
}

impl<G: Generator> Reader for GenerativeReader<G> {
    fn name(&self) -> &str {
        &self.name
    }

    fn answer(&self, input: &ReaderInput) -> Result<SpanAnswer, ReaderError> {
        let raw = self.generator.generate(&Self::prompt(input))?;
        let answer = clean(&raw);
        if answer.is_empty() {
            return Err(ReaderError::NoAnswer(input.question.clone()));
        }
        // Generators often end with a full stop that is not part of the span.
        let stripped = answer.trim_end_matches('.');
        (!stripped.is_empty())
            .then(|| SpanAnswer::locate(&input.context, stripped, 1.0))
            .flatten()
            .or_else(|| SpanAnswer::locate(&input.context, answer, 1.0))
            .ok_or_else(|| ReaderError::NonExtractive {
                answer: answer.to_string(),
            })
    }
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    temperature: f64,
    messages: Vec<ChatMessage<'a>>,
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatReply,
}

#[derive(Deserialize)]
struct ChatReply {
    content: String,
}

/// Generator for OpenAI-compatible `POST {base}/chat/completions` services.
pub struct ChatCompletionsGenerator {
    client: JsonClient,
    model: String,
}

impl ChatCompletionsGenerator {
    pub fn new(base_url: &str, model: impl Into<String>, api_key: Option<String>, policy: RetryPolicy) -> Self {
        let url = format!("{}/chat/completions", base_url.trim_end_matches('/'));
        ChatCompletionsGenerator {
            client: JsonClient::new(url, policy).with_bearer(api_key),
            model: model.into(),
        }
    }
}

impl Generator for ChatCompletionsGenerator {
    fn generate(&self, prompt: &str) -> Result<String, ReaderError> {
        let request = ChatRequest {
            model: &self.model,
            temperature: 0.0,
            messages: vec![ChatMessage {
                role: "user",
                content: prompt,
            }],
        };
        let response: ChatResponse = self.client.post(&request).map_err(|e| match e {
            HttpError::Transport { attempts, message } => ReaderError::Transport {
                endpoint: self.client.url().to_string(),
                attempts,
                message,
            },
            HttpError::Status { code, body } => ReaderError::Protocol(format!("HTTP {code}: {body}")),
            HttpError::Decode(msg) => ReaderError::Protocol(format!("malformed response: {msg}")),
        })?;
        response
            .choices
            .into_iter()
            .next()
            .map(|c| c.message.content)
            .ok_or_else(|| ReaderError::Protocol("completion had no choices".into()))
    }
}
