//! Blocking JSON-over-HTTP client shared by the remote reader, the
//! generative reader, and the external retriever.

use std::sync::{Condvar, Mutex};
use std::thread;
use std::time::Duration;

use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    /// Attempts beyond the first.
    pub max_retries: u32,
    pub initial_backoff: Duration,
    pub max_backoff: Duration,
    pub timeout: Duration,
    /// Upper bound on requests in flight from one client.
    pub max_concurrent: usize,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_retries: 3,
            initial_backoff: Duration::from_millis(100),
            max_backoff: Duration::from_secs(5),
            timeout: Duration::from_secs(30),
            max_concurrent: 4,
        }
    }
}

impl RetryPolicy {
    pub fn backoff(&self, attempt: u32) -> Duration {
        let factor = 1u32.checked_shl(attempt).unwrap_or(u32::MAX);
        self.initial_backoff.saturating_mul(factor).min(self.max_backoff)
    }
}

#[derive(Debug)]
pub(crate) enum HttpError {
    /// Connection-level failure or repeated 5xx, after all retries.
    Transport { attempts: u32, message: String },
    /// A non-retryable HTTP status.
    Status { code: u16, body: String },
    /// The response body was not the expected JSON.
    Decode(String),
}

struct Semaphore {
    available: Mutex<usize>,
    cond: Condvar,
}

struct Permit<'a>(&'a Semaphore);

impl Semaphore {
    fn new(n: usize) -> Self {
        Semaphore {
            available: Mutex::new(n.max(1)),
            cond: Condvar::new(),
        }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut n = self.available.lock().unwrap_or_else(|e| e.into_inner());
        while *n == 0 {
            n = self.cond.wait(n).unwrap_or_else(|e| e.into_inner());
        }
        *n -= 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.available.lock().unwrap_or_else(|e| e.into_inner()) += 1;
        self.0.cond.notify_one();
    }
}

pub(crate) struct JsonClient {
    url: String,
    agent: ureq::Agent,
    policy: RetryPolicy,
    permits: Semaphore,
    bearer: Option<String>,
}

impl JsonClient {
    pub(crate) fn new(url: impl Into<String>, policy: RetryPolicy) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(policy.timeout))
            .http_status_as_error(false)
            .build()
            .new_agent();
        JsonClient {
            url: url.into(),
            agent,
            permits: Semaphore::new(policy.max_concurrent),
            policy,
            bearer: None,
        }
    }

    pub(crate) fn with_bearer(mut self, token: Option<String>) -> Self {
        self.bearer = token;
        self
    }

    pub(crate) fn url(&self) -> &str {
        &self.url
    }

    pub(crate) fn post<Req: Serialize, Resp: DeserializeOwned>(&self, body: &Req) -> Result<Resp, HttpError> {
        let _permit = self.permits.acquire();
        let mut attempt = 0;
        loop {
            let mut request = self.agent.post(&self.url);
            if let Some(token) = &self.bearer {
                request = request.header("Authorization", &format!("Bearer {token}"));
            }
            let failure = match request.send_json(body) {
                Ok(mut response) => {
                    let status = response.status().as_u16();
                    if (200..300).contains(&status) {
                        return response.body_mut().read_json::<Resp>().map_err(|e| HttpError::Decode(e.to_string()));
                    }
                    let text = response.body_mut().read_to_string().unwrap_or_default();
                    if status < 500 {
                        return Err(HttpError::Status { code: status, body: text });
                    }
                    format!("HTTP {status}: {text}")
                }
                Err(e) => e.to_string(),
            };
            attempt += 1;
            if attempt > self.policy.max_retries {
                return Err(HttpError::Transport {
                    attempts: attempt,
                    message: failure,
                });
            }
            log::debug!("{} failed (attempt {attempt}): {failure}; retrying", self.url);
            thread::sleep(self.policy.backoff(attempt - 1));
        }
    }
}
