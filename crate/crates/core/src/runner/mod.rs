//! Runs prompts against a chat-completions endpoint, with retries, rate
//! limiting and a resumable JSONL cache.

mod cache;
mod transport;

pub use cache::Cache;
pub use transport::{request_body, response_content, ChatTransport, HttpTransport, TransportError, API_KEY_ENV};

use std::collections::HashMap;
use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{mpsc, Mutex};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::Corpus;
use crate::promptkit::{
    build_prompt, extract_translation, ChatMessage, Exemplar, ExtractionOutcome, PromptError, PromptFormat, PromptSpec,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ClientConfig {
    pub endpoint: String,
    pub model: String,
    pub temperature: f64,
    pub timeout_secs: u64,
    pub max_retries: u32,
    /// Requests per second across all workers; `None` for no limit.
    pub rate_limit: Option<f64>,
    /// In-flight requests.
    pub concurrency: usize,
    /// Delay before the first retry; doubled on each further retry.
    pub retry_backoff: Duration,
}

impl Default for ClientConfig {
    fn default() -> Self {
        ClientConfig {
            endpoint: "https://api.openai.com/v1/chat/completions".into(),
            model: "gpt-4".into(),
            temperature: 0.0,
            timeout_secs: 120,
            max_retries: 3,
            rate_limit: None,
            concurrency: 1,
            retry_backoff: Duration::from_millis(500),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordOutcome {
    Ok,
    Unparseable,
    /// The request itself failed; never cached.
    Failed,
}

/// One line of the cache.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub entry_id: String,
    pub prompt_hash: String,
    pub raw_output: Option<String>,
    pub translation: Option<String>,
    pub outcome: RecordOutcome,
    pub error: Option<String>,
    pub model: String,
    /// Unix milliseconds.
    pub started_ms: u64,
    pub finished_ms: u64,
    #[serde(skip)]
    pub from_cache: bool,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("authentication rejected (HTTP {status}): {body}")]
    Auth { status: u16, body: String },
    #[error("cache corrupted at byte offset {offset}: {message}")]
    CacheCorruption { offset: u64, message: String },
    #[error("no run record for entry {0}")]
    MissingEntry(String),
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// Hex SHA-256 of the canonical JSON of `{messages, model, temperature}`.
pub fn prompt_hash(messages: &[ChatMessage], model: &str, temperature: f64) -> String {
    let canonical = serde_json::json!({
        "messages": messages,
        "model": model,
        "temperature": temperature,
    });
    let bytes = serde_json::to_vec(&canonical).expect("prompt serializes");
    format!("{:x}", Sha256::digest(bytes))
}

/// A prompt waiting to be sent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptJob {
    pub entry_id: String,
    pub messages: Vec<ChatMessage>,
}

/// Builds one prompt per corpus entry.
pub fn build_jobs(corpus: &Corpus, spec: &PromptSpec, exemplars: &[Exemplar]) -> Result<Vec<PromptJob>, PromptError> {
    corpus
        .iter()
        .map(|e| {
            Ok(PromptJob {
                entry_id: e.id.clone(),
                messages: build_prompt(&e.source, spec, exemplars)?,
            })
        })
        .collect()
}

/// Prompts every corpus entry and returns one record per entry, in corpus
/// order.
pub fn run_corpus(
    corpus: &Corpus,
    spec: &PromptSpec,
    exemplars: &[Exemplar],
    config: &ClientConfig,
    cache_path: &Path,
    transport: &dyn ChatTransport,
) -> Result<Vec<RunRecord>, RunError> {
    let jobs = build_jobs(corpus, spec, exemplars)?;
    run_jobs(&jobs, spec.format, config, cache_path, transport)
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

fn classify(raw: &str, format: PromptFormat) -> (RecordOutcome, Option<String>) {
    let ex = extract_translation(raw, format);
    match ex.outcome {
        ExtractionOutcome::Ok => (RecordOutcome::Ok, ex.translation),
        ExtractionOutcome::Unparseable => (RecordOutcome::Unparseable, None),
    }
}

struct RateLimiter {
    interval: Option<Duration>,
    next: Mutex<Instant>,
}

impl RateLimiter {
    fn new(rate: Option<f64>) -> Self {
        RateLimiter {
            interval: rate.filter(|r| *r > 0.0).map(|r| Duration::from_secs_f64(1.0 / r)),
            next: Mutex::new(Instant::now()),
        }
    }

    fn wait(&self) {
        let Some(interval) = self.interval else { return };
        let slot = {
            let mut next = self.next.lock().unwrap();
            let slot = (*next).max(Instant::now());
            *next = slot + interval;
            slot
        };
        let now = Instant::now();
        if slot > now {
            std::thread::sleep(slot - now);
        }
    }
}

fn send_with_retries(
    transport: &dyn ChatTransport,
    config: &ClientConfig,
    limiter: &RateLimiter,
    messages: &[ChatMessage],
) -> Result<String, TransportError> {
    let mut attempt = 0;
    loop {
        limiter.wait();
        match transport.complete(config, messages) {
            Err(e) if e.is_retryable() && attempt < config.max_retries => {
                std::thread::sleep(config.retry_backoff * 2u32.saturating_pow(attempt));
                attempt += 1;
            }
            other => return other,
        }
    }
}

/// Sends the jobs that miss the cache and returns one record per job, in
/// job order. Successful and unparseable responses are appended to the
/// cache as they arrive; failed requests are recorded but not cached so a
/// rerun retries them. An authentication error stops the run.
pub fn run_jobs(
    jobs: &[PromptJob],
    format: PromptFormat,
    config: &ClientConfig,
    cache_path: &Path,
    transport: &dyn ChatTransport,
) -> Result<Vec<RunRecord>, RunError> {
    let mut cache = Cache::open(cache_path)?;
    let mut results: Vec<Option<RunRecord>> = vec![None; jobs.len()];
    let mut pending = Vec::new();
    for (i, job) in jobs.iter().enumerate() {
        let hash = prompt_hash(&job.messages, &config.model, config.temperature);
        match cache.get(&hash) {
            Some(hit) => {
                let (outcome, translation) = classify(hit.raw_output.as_deref().unwrap_or(""), format);
                results[i] = Some(RunRecord {
                    entry_id: job.entry_id.clone(),
                    outcome,
                    translation,
                    from_cache: true,
                    ..hit.clone()
                });
            }
            None => pending.push((i, hash)),
        }
    }

    let limiter = RateLimiter::new(config.rate_limit);
    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let auth: Mutex<Option<TransportError>> = Mutex::new(None);
    let mut write_error = None;

    std::thread::scope(|s| {
        let (tx, rx) = mpsc::channel::<(usize, RunRecord)>();
        for _ in 0..config.concurrency.max(1).min(pending.len().max(1)) {
            let tx = tx.clone();
            let (pending, next, abort, auth, limiter) = (&pending, &next, &abort, &auth, &limiter);
            s.spawn(move || loop {
                if abort.load(Ordering::SeqCst) {
                    break;
                }
                let k = next.fetch_add(1, Ordering::SeqCst);
                let Some((i, hash)) = pending.get(k) else { break };
                let job = &jobs[*i];
                let started_ms = now_ms();
                let response = send_with_retries(transport, config, limiter, &job.messages);
                let (raw_output, outcome, translation, error) = match response {
                    Ok(raw) => {
                        let (outcome, translation) = classify(&raw, format);
                        (Some(raw), outcome, translation, None)
                    }
                    Err(e @ TransportError::Auth { .. }) => {
                        abort.store(true, Ordering::SeqCst);
                        auth.lock().unwrap().get_or_insert(e);
                        break;
                    }
                    Err(e) => (None, RecordOutcome::Failed, None, Some(e.to_string())),
                };
                let record = RunRecord {
                    entry_id: job.entry_id.clone(),
                    prompt_hash: hash.clone(),
                    raw_output,
                    translation,
                    outcome,
                    error,
                    model: config.model.clone(),
                    started_ms,
                    finished_ms: now_ms(),
                    from_cache: false,
                };
                if tx.send((*i, record)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (i, record) in rx {
            if record.outcome != RecordOutcome::Failed && write_error.is_none() {
                if let Err(e) = cache.append(&record) {
                    abort.store(true, Ordering::SeqCst);
                    write_error = Some(e);
                }
            }
            results[i] = Some(record);
        }
    });

    if let Some(e) = write_error {
        return Err(e);
    }
    if let Some(TransportError::Auth { status, body }) = auth.into_inner().unwrap() {
        return Err(RunError::Auth { status, body });
    }
    Ok(results.into_iter().map(|r| r.expect("every job produced a record")).collect())
}

/// One hypothesis line per id in `corpus_order`. Failed and unparseable
/// entries give blank lines; newlines inside a translation become spaces.
pub fn export_hypotheses(records: &[RunRecord], corpus_order: &[String]) -> Result<String, RunError> {
    let by_id: HashMap<&str, &RunRecord> = records.iter().map(|r| (r.entry_id.as_str(), r)).collect();
    let mut out = String::new();
    for id in corpus_order {
        let record = by_id.get(id.as_str()).ok_or_else(|| RunError::MissingEntry(id.clone()))?;
        if let (RecordOutcome::Ok, Some(t)) = (record.outcome, &record.translation) {
            out.push_str(&t.replace(['\r', '\n'], " "));
        }
        out.push('\n');
    }
    Ok(out)
}
