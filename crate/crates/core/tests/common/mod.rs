#![allow(dead_code)]

pub mod synth;

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use neogate_core::{parse_corpus, Corpus, TagsetDefinition};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(name)
}

pub fn load(path: &Path) -> Corpus {
    let raw = std::fs::read(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_corpus(&raw, &TagsetDefinition::neo_gate()).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn sample() -> Corpus {
    load(&fixture("data/sample.tsv"))
}

pub fn dev_sample() -> Corpus {
    load(&fixture("data/dev_sample.tsv"))
}

/// Directory holding the released splits: `NEO_GATE_DIR`, else
/// `data/neo-gate` inside this crate.
pub fn release_dir() -> PathBuf {
    std::env::var_os("NEO_GATE_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join("neo-gate"))
}

/// First `.tsv` file in the release directory whose name mentions `split`.
pub fn release_split(split: &str) -> Option<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(release_dir())
        .ok()?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("").to_ascii_lowercase();
            name.ends_with(".tsv") && name.contains(split)
        })
        .collect();
    files.sort();
    files.into_iter().next()
}

type Script = dyn Fn(&str) -> (u16, String) + Send + Sync;

/// Minimal chat-completions server. Each request's last user message is
/// handed to the script, which returns the status and the completion text
/// (or error body for non-200 statuses).
pub struct ScriptedServer {
    pub url: String,
    pub requests: Arc<AtomicUsize>,
    pub bodies: Arc<Mutex<Vec<String>>>,
}

impl ScriptedServer {
    pub fn start(script: impl Fn(&str) -> (u16, String) + Send + Sync + 'static) -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let url = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
        let requests = Arc::new(AtomicUsize::new(0));
        let bodies = Arc::new(Mutex::new(Vec::new()));
        let script: Arc<Script> = Arc::new(script);
        let (r, b) = (requests.clone(), bodies.clone());
        std::thread::spawn(move || {
            for stream in listener.incoming().flatten() {
                let (script, r, b) = (script.clone(), r.clone(), b.clone());
                std::thread::spawn(move || serve(stream, &*script, &r, &b));
            }
        });
        ScriptedServer { url, requests, bodies }
    }

    /// Replies with `<source>` for every prompt, or with the mapped reply
    /// when the source is a key of `replies`.
    pub fn echo(replies: HashMap<String, String>) -> Self {
        Self::start(move |last_user| {
            let src = source_of(last_user);
            (200, replies.get(&src).cloned().unwrap_or_else(|| format!("<{src}>")))
        })
    }

    pub fn count(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }
}

/// Text between `[English] <` and the following `>`.
pub fn source_of(user_message: &str) -> String {
    let start = user_message.rfind("[English] <").map(|i| i + "[English] <".len()).unwrap_or(0);
    let rest = &user_message[start..];
    rest[..rest.find(">\n").unwrap_or(rest.len())].to_string()
}

fn serve(stream: TcpStream, script: &Script, requests: &AtomicUsize, bodies: &Mutex<Vec<String>>) {
    let mut reader = BufReader::new(stream.try_clone().unwrap());
    let mut out = stream;
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line).unwrap_or(0) == 0 {
            return;
        }
        let mut len = 0usize;
        loop {
            let mut h = String::new();
            if reader.read_line(&mut h).unwrap_or(0) == 0 {
                return;
            }
            let h = h.trim_end();
            if h.is_empty() {
                break;
            }
            if let Some((k, v)) = h.split_once(':') {
                if k.eq_ignore_ascii_case("content-length") {
                    len = v.trim().parse().unwrap_or(0);
                }
            }
        }
        let mut body = vec![0; len];
        if reader.read_exact(&mut body).is_err() {
            return;
        }
        requests.fetch_add(1, Ordering::SeqCst);
        let body = String::from_utf8_lossy(&body).to_string();
        bodies.lock().unwrap().push(body.clone());
        let json: serde_json::Value = serde_json::from_str(&body).unwrap_or_default();
        let last = json["messages"]
            .as_array()
            .and_then(|m| m.last())
            .and_then(|m| m["content"].as_str())
            .unwrap_or("")
            .to_string();
        let (status, text) = script(&last);
        let payload = if status == 200 {
            serde_json::json!({"choices": [{"index": 0, "message": {"role": "assistant", "content": text}}]}).to_string()
        } else {
            text
        };
        let resp = format!(
            "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\n\r\n{payload}",
            payload.len()
        );
        if out.write_all(resp.as_bytes()).is_err() {
            return;
        }
    }
}

pub fn score(
    corpus: &Corpus,
    mapping: &neogate_core::TagsetMapping,
    hyps: &[Option<String>],
) -> (Vec<neogate_core::evaluator::EntryEval>, neogate_core::MetricReport) {
    use neogate_core::evaluator::{aggregate, compute_metrics, evaluate_corpus};
    let adapted = neogate_core::paradigm::adapt_corpus(corpus, mapping).unwrap();
    let evals = evaluate_corpus(&adapted, hyps, mapping, neogate_core::Execution::default()).unwrap();
    let report = compute_metrics(&aggregate(&evals)).unwrap();
    (evals, report)
}

/// Each entry's own adapted reference as its hypothesis.
pub fn self_hypotheses(corpus: &Corpus, mapping: &neogate_core::TagsetMapping) -> Vec<Option<String>> {
    neogate_core::paradigm::adapt_corpus(corpus, mapping)
        .unwrap()
        .into_iter()
        .map(|a| Some(a.ref_adapted))
        .collect()
}

pub fn masculine_hypotheses(corpus: &Corpus) -> Vec<Option<String>> {
    corpus.iter().map(|e| Some(e.ref_masc.clone())).collect()
}
