use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use neogate_core::report::{parse_report_kv, RunManifest};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name)
}

fn neogate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_neogate")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn sample() -> String {
    data("sample.tsv").display().to_string()
}

#[test]
fn self_evaluation_report() {
    let dir = tempfile::tempdir().unwrap();
    let hyp = dir.path().join("refs_adapted.txt");
    let out = dir.path().join("out");
    let hyp_s = hyp.display().to_string();
    let adapt = neogate(&["adapt", "--corpus", &sample(), "--paradigm", "asterisk", "--refs-only", "-o", &hyp_s]);
    assert!(adapt.status.success());

    let o = neogate(&[
        "evaluate",
        "--corpus",
        &sample(),
        "--paradigm",
        "asterisk",
        "--hyp",
        &hyp_s,
        "--out",
        &out.display().to_string(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().nth(1), Some("100.00  100.00  100.00  0.00"));
    for f in ["report.txt", "report.kv", "trace.tsv", "manifest.kv"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let kv = parse_report_kv(&std::fs::read_to_string(out.join("report.kv")).unwrap()).unwrap();
    assert_eq!((kv.cov.0, kv.acc.0, kv.cwa.0, kv.mis.0), (10_000, 10_000, 10_000, 0));
    let m = RunManifest::from_kv(&std::fs::read_to_string(out.join("manifest.kv")).unwrap()).unwrap();
    assert_eq!((m.command.as_str(), m.paradigm.as_str()), ("evaluate", "asterisk"));
    assert_eq!(m.tool_version, env!("CARGO_PKG_VERSION"));
    assert_eq!(std::fs::read_to_string(out.join("trace.tsv")).unwrap().lines().count(), 6);
}

#[test]
fn masculine_hypotheses_score_zero_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let hyp = dir.path().join("masc.txt");
    let raw = std::fs::read_to_string(data("sample.tsv")).unwrap();
    let masc: String = raw.lines().skip(1).map(|l| format!("{}\n", l.split('\t').nth(2).unwrap())).collect();
    std::fs::write(&hyp, masc).unwrap();
    let o = neogate(&["evaluate", "--corpus", &sample(), "--hyp", &hyp.display().to_string(), "--report", "kv"]);
    assert!(o.status.success());
    let kv = parse_report_kv(&stdout(&o)).unwrap();
    assert_eq!((kv.cov.0, kv.acc.0, kv.mis.0), (10_000, 0, 0));
}

#[test]
fn stats_prints_counts() {
    let o = neogate(&["stats", "--corpus", &sample()]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("entries=5\n") && s.contains("tags=13\n"), "{s}");
}

#[test]
fn adapt_to_schwa() {
    let o = neogate(&["adapt", "--paradigm", "schwa", "--corpus", &sample()]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.lines().next().unwrap().starts_with("ID\tSOURCE"));
    assert!(s.lines().any(|l| l.contains("Lə direttorə")));
    assert!(s.contains("il la lə; direttore direttrice direttorə;"));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# shared\nparadigm=schwa\nrefs_only=true\nmodel=unused-here\n").unwrap();
    let cfg = cfg.display().to_string();
    let o = neogate(&["--config", &cfg, "adapt", "--corpus", &sample()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("Lə direttorə"));
    let o = neogate(&["adapt", "--config", &cfg, "--corpus", &sample(), "--paradigm", "asterisk"]);
    assert!(stdout(&o).starts_with("L* direttor*"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(neogate(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(neogate(&["stats"]).status.code(), Some(2));
    assert_eq!(neogate(&["evaluate", "--corpus", &sample()]).status.code(), Some(2));
    assert_eq!(neogate(&["prompt", "--format", "quaternary", "--source", "x"]).status.code(), Some(2));
    assert_eq!(neogate(&["--config"]).status.code(), Some(2));
}

#[test]
fn data_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.tsv").display().to_string();
    let o = neogate(&["stats", "--corpus", &missing]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope.tsv"));

    let short = dir.path().join("short.txt");
    std::fs::write(&short, "one line\n").unwrap();
    let o = neogate(&["evaluate", "--corpus", &sample(), "--hyp", &short.display().to_string()]);
    assert_eq!(o.status.code(), Some(1));

    let bad = dir.path().join("bad.tsv");
    let raw = std::fs::read_to_string(data("sample.tsv")).unwrap();
    std::fs::write(&bad, raw.replace("direttore direttrice direttor<ENDS>;", "capo capa direttor<ENDS>;")).unwrap();
    let o = neogate(&["validate", "--corpus", &bad.display().to_string()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("error\t1\t"), "{err}");
}

#[test]
fn validate_clean_fixture() {
    let o = neogate(&["validate", "--corpus", &sample(), "--paradigm", "schwa"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("5 entries, 0 errors"));
}

#[test]
fn prompt_dump() {
    let dev = data("dev_sample.tsv").display().to_string();
    let o = neogate(&["prompt", "--format", "ternary", "--dev", &dev, "--exemplars", "d1", "--corpus", &sample(), "--entry", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("[Italian, feminine] <Non compro mai fiori per le mie amiche.>"));
    assert!(s.contains("[English] <I hope the shaman can help us.>\\n[Italian, masculine]"));
    let o = neogate(&["prompt", "--paradigm", "schwa", "--source", "Hi."]);
    assert!(stdout(&o).contains("'ə' (singular) and 'ɜ' (plural)"));
}

#[test]
fn extract_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_neogate"))
        .args(["extract", "--format", "binary"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all("<I maschile.>\n[Italian, neomorpheme] <L* version*.>".as_bytes())
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "L* version*.\n");

    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.txt");
    std::fs::write(&raw, "Sure! Here it is: translation without brackets").unwrap();
    assert_eq!(neogate(&["extract", &raw.display().to_string()]).status.code(), Some(1));
}

#[test]
fn kappa_of_identical_annotations() {
    let o = neogate(&["kappa", &sample(), &sample()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("n=13\nkappa=1.0000"));
}

/// Answers every chat request with the same completion; returns the endpoint
/// and a request counter.
fn constant_server(content: &'static str) -> (String, std::sync::Arc<std::sync::atomic::AtomicUsize>) {
    use std::io::{BufRead, BufReader, Read};
    use std::sync::atomic::Ordering;
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
    let hits = std::sync::Arc::new(std::sync::atomic::AtomicUsize::new(0));
    let h = hits.clone();
    std::thread::spawn(move || {
        for mut stream in listener.incoming().flatten() {
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut len = 0;
            let mut line = String::new();
            while reader.read_line(&mut line).unwrap_or(0) > 0 && line != "\r\n" {
                if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                    len = v.trim().parse().unwrap();
                }
                line.clear();
            }
            let mut body = vec![0; len];
            reader.read_exact(&mut body).unwrap();
            h.fetch_add(1, Ordering::SeqCst);
            let json = format!(r#"{{"choices":[{{"message":{{"role":"assistant","content":"{content}"}}}}]}}"#);
            let _ = write!(
                stream,
                "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{json}",
                json.len()
            );
        }
    });
    (url, hits)
}

#[test]
fn run_writes_hypotheses_and_reuses_cache() {
    use std::sync::atomic::Ordering;
    let (url, hits) = constant_server("<L* direttor* è arrivat*.>");
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl").display().to_string();
    let hyp = dir.path().join("hyp.txt");
    let out = dir.path().join("run");
    let args = [
        "run",
        "--corpus",
        &sample(),
        "--endpoint",
        &url,
        "--cache",
        &cache,
        "--hyp-out",
        &hyp.display().to_string(),
        "--out",
        &out.display().to_string(),
        "--concurrency",
        "2",
    ];
    let o = neogate(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(hits.load(Ordering::SeqCst), 5);
    let lines: Vec<String> = std::fs::read_to_string(&hyp).unwrap().lines().map(String::from).collect();
    assert_eq!(lines, vec!["L* direttor* è arrivat*."; 5]);
    assert_eq!(std::fs::read_to_string(&cache).unwrap().lines().count(), 5);
    let m = RunManifest::from_kv(&std::fs::read_to_string(out.join("manifest.kv")).unwrap()).unwrap();
    assert_eq!(m.command, "run");

    let o = neogate(&args);
    assert!(o.status.success());
    assert_eq!(hits.load(Ordering::SeqCst), 5);
    assert!(String::from_utf8_lossy(&o.stderr).contains("(5 from cache)"), "{}", String::from_utf8_lossy(&o.stderr));
}
