//! HTTP text-generation client speaking the chat-completions wire format,
//! with bounded exponential-backoff retries on transient failures.

use std::thread;
use std::time::Duration;

use orforge_core::gen::{FinishReason, GenRequest, GenResponse, GenUsage, TextGenerator};
use serde::Deserialize;

use crate::config::{GenerationConfig, RetryConfig};

/// The one HTTP operation the client needs. Kept as a trait so tests can
/// substitute canned responses and fault sequences for the real network.
pub trait HttpTransport: Send + Sync {
    /// POSTs a JSON body with a bearer token; returns the HTTP status and
    /// response body, or a transport-level error message.
    fn post_json(&self, url: &str, api_key: &str, body: &str) -> Result<(u16, String), String>;
}

/// Production transport backed by a blocking HTTP agent.
pub struct UreqTransport {
    agent: ureq::Agent,
}

impl UreqTransport {
    pub fn new(timeout: Duration) -> Self {
        UreqTransport {
            agent: ureq::AgentBuilder::new().timeout(timeout).build(),
        }
    }
}

impl Default for UreqTransport {
    fn default() -> Self {
        UreqTransport::new(Duration::from_secs(120))
    }
}

impl HttpTransport for UreqTransport {
    fn post_json(&self, url: &str, api_key: &str, body: &str) -> Result<(u16, String), String> {
        let request = self
            .agent
            .post(url)
            .set("Authorization", &format!("Bearer {api_key}"))
            .set("Content-Type", "application/json");
        match request.send_string(body) {
            Ok(response) => {
                let status = response.status();
                let body = response.into_string().map_err(|err| err.to_string())?;
                Ok((status, body))
            }
            // Non-2xx responses still carry a body worth surfacing.
            Err(ureq::Error::Status(code, response)) => {
                Ok((code, response.into_string().unwrap_or_default()))
            }
            Err(ureq::Error::Transport(transport)) => Err(transport.to_string()),
        }
    }
}

/// A [`TextGenerator`] that forwards prompts to a chat-completions endpoint.
pub struct ChatClient<T: HttpTransport> {
    transport: T,
    endpoint: String,
    model_name: String,
    api_key: String,
    retry: RetryConfig,
}

impl<T: HttpTransport> ChatClient<T> {
    /// Builds a client from the generation section and a resolved API key.
    /// Fails when the endpoint is missing, since there is nothing to call.
    pub fn new(config: &GenerationConfig, api_key: String, transport: T) -> anyhow::Result<Self> {
        if config.endpoint.is_empty() {
            anyhow::bail!("generation.endpoint is empty; live generation needs a URL");
        }
        Ok(ChatClient {
            transport,
            endpoint: config.endpoint.clone(),
            model_name: config.model_name.clone(),
            api_key,
            retry: config.retry.clone(),
        })
    }

    fn request_body(&self, request: &GenRequest) -> String {
        serde_json::json!({
            "model": self.model_name,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        })
        .to_string()
    }
}

/// Failures worth retrying: rate limits, server errors, and anything that
/// never produced an HTTP status. Other client errors repeat deterministically
/// and fail fast; 401/403 in particular always mean a bad credential.
fn retryable(status: Option<u16>) -> bool {
    match status {
        Some(code) => code == 429 || code >= 500,
        None => true,
    }
}

fn describe(status: Option<u16>, detail: &str) -> String {
    let detail = detail.trim();
    let detail = if detail.len() > 200 { &detail[..200] } else { detail };
    match status {
        Some(401) | Some(403) => {
            format!("authentication rejected (HTTP {}): {detail}", status.unwrap())
        }
        Some(code) => format!("HTTP {code}: {detail}"),
        None => format!("transport error: {detail}"),
    }
}

impl<T: HttpTransport> TextGenerator for ChatClient<T> {
    fn generate(&self, request: &GenRequest) -> GenResponse {
        if let Err(problem) = request.validate() {
            return GenResponse::failure(format!("invalid request: {problem}"));
        }
        let body = self.request_body(request);
        let max_attempts = self.retry.max_attempts.max(1);
        let mut delay_ms = self.retry.base_delay_ms;
        let mut last_failure = String::new();
        for attempt in 1..=max_attempts {
            let outcome = self.transport.post_json(&self.endpoint, &self.api_key, &body);
            let status = match &outcome {
                Ok((status, _)) => Some(*status),
                Err(_) => None,
            };
            match outcome {
                Ok((200, body)) => return parse_provider_reply(&body, &request.prompt),
                Ok((_, body)) => last_failure = describe(status, &body),
                Err(transport) => last_failure = describe(None, &transport),
            }
            if !retryable(status) {
                return GenResponse::failure(format!(
                    "request {} failed without retry: {last_failure}",
                    request.request_tag
                ));
            }
            if attempt < max_attempts {
                eprintln!(
                    "generation request {}: attempt {attempt}/{max_attempts} failed \
                     ({last_failure}); retrying in {delay_ms} ms",
                    request.request_tag
                );
                if delay_ms > 0 {
                    thread::sleep(Duration::from_millis(delay_ms));
                }
                delay_ms = delay_ms.saturating_mul(2);
            }
        }
        GenResponse::failure(format!(
            "request {} failed after {max_attempts} attempts: {last_failure}",
            request.request_tag
        ))
    }
}

#[derive(Deserialize)]
struct WireReply {
    #[serde(default)]
    choices: Vec<WireChoice>,
    #[serde(default)]
    usage: Option<WireUsage>,
}

#[derive(Deserialize)]
struct WireChoice {
    message: WireMessage,
    #[serde(default)]
    finish_reason: Option<String>,
}

#[derive(Deserialize)]
struct WireMessage {
    #[serde(default)]
    content: Option<String>,
}

#[derive(Deserialize)]
struct WireUsage {
    #[serde(default)]
    prompt_tokens: u64,
    #[serde(default)]
    completion_tokens: u64,
}

/// Maps a 200-status provider body onto a [`GenResponse`]. Whitespace token
/// counts stand in when the provider omits usage numbers.
fn parse_provider_reply(body: &str, prompt: &str) -> GenResponse {
    let reply: WireReply = match serde_json::from_str(body) {
        Ok(reply) => reply,
        Err(err) => return GenResponse::failure(format!("malformed provider reply: {err}")),
    };
    let Some(choice) = reply.choices.into_iter().next() else {
        return GenResponse::failure("provider reply has no choices");
    };
    let text = choice.message.content.unwrap_or_default();
    if text.is_empty() {
        return GenResponse::failure("provider reply has empty text");
    }
    let finish_reason = match choice.finish_reason.as_deref() {
        Some("length") => FinishReason::Length,
        _ => FinishReason::Complete,
    };
    let usage = match reply.usage {
        Some(usage) => GenUsage {
            prompt_tokens: usage.prompt_tokens,
            output_tokens: usage.completion_tokens,
        },
        None => GenUsage {
            prompt_tokens: prompt.split_whitespace().count() as u64,
            output_tokens: text.split_whitespace().count() as u64,
        },
    };
    GenResponse {
        text,
        finish_reason,
        usage,
        error: None,
    }
}
