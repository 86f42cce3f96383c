use std::time::Duration;

use serde_json::{json, Value};
use thiserror::Error;

use super::ClientConfig;
use crate::promptkit::ChatMessage;

/// Environment variable holding the API credential.
pub const API_KEY_ENV: &str = "NEOGATE_API_KEY";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("authentication rejected (HTTP {status}): {body}")]
    Auth { status: u16, body: String },
    #[error("HTTP {status}: {body}")]
    Status { status: u16, body: String },
    #[error("network error: {0}")]
    Network(String),
    #[error("unexpected response: {0}")]
    Protocol(String),
}

impl TransportError {
    pub fn is_retryable(&self) -> bool {
        match self {
            TransportError::Status { status, .. } => *status == 429 || *status >= 500,
            TransportError::Network(_) => true,
            TransportError::Auth { .. } | TransportError::Protocol(_) => false,
        }
    }
}

/// Sends one chat request and returns the completion text.
pub trait ChatTransport: Sync {
    fn complete(&self, config: &ClientConfig, messages: &[ChatMessage]) -> Result<String, TransportError>;
}

/// Request body: `{"model", "messages": [{"role", "content"}], "temperature"}`.
pub fn request_body(config: &ClientConfig, messages: &[ChatMessage]) -> Value {
    json!({
        "model": config.model,
        "messages": messages,
        "temperature": config.temperature,
    })
}

/// Reads `choices[0].message.content`.
pub fn response_content(body: &Value) -> Result<String, TransportError> {
    body.pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| TransportError::Protocol("no choices[0].message.content".into()))
}

/// Blocking HTTP client for chat-completions endpoints.
pub struct HttpTransport {
    agent: ureq::Agent,
    api_key: Option<String>,
}

impl HttpTransport {
    pub fn new(config: &ClientConfig, api_key: Option<String>) -> Self {
        let agent = ureq::AgentBuilder::new()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build();
        HttpTransport { agent, api_key }
    }

    /// Reads the key from `NEOGATE_API_KEY`, if set.
    pub fn from_env(config: &ClientConfig) -> Self {
        let key = std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty());
        Self::new(config, key)
    }
}

impl ChatTransport for HttpTransport {
    fn complete(&self, config: &ClientConfig, messages: &[ChatMessage]) -> Result<String, TransportError> {
        let mut req = self.agent.post(&config.endpoint).set("Content-Type", "application/json");
        if let Some(key) = &self.api_key {
            req = req.set("Authorization", &format!("Bearer {key}"));
        }
        match req.send_json(request_body(config, messages)) {
            Ok(resp) => {
                let body: Value = resp.into_json().map_err(|e| TransportError::Protocol(e.to_string()))?;
                response_content(&body)
            }
            Err(ureq::Error::Status(status, resp)) => {
                let body = resp.into_string().unwrap_or_default();
                if status == 401 || status == 403 {
                    Err(TransportError::Auth { status, body })
                } else {
                    Err(TransportError::Status { status, body })
                }
            }
            Err(ureq::Error::Transport(t)) => Err(TransportError::Network(t.to_string())),
        }
    }
}
