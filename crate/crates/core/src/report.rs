//! Plain-text and key-value renderings of metric reports, and run manifests.

use std::collections::BTreeMap;
use std::str::FromStr;

use thiserror::Error;

use crate::evaluator::{Counters, EvalCounts, MetricReport, Percent};
use crate::paradigm::{Kind, Number};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Aligned table for people.
    Text,
    /// `key=value` lines for scripts.
    Kv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" | "txt" => Ok(ReportFormat::Text),
            "kv" => Ok(ReportFormat::Kv),
            other => Err(format!("unknown report format {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("missing key {0}")]
    MissingKey(String),
}

const KINDS: [Kind; 2] = [Kind::Content, Kind::Function];
const NUMBERS: [Number; 2] = [Number::Singular, Number::Plural];

fn row(cells: &[String], widths: &[usize]) -> String {
    cells
        .iter()
        .zip(widths)
        .map(|(c, w)| format!("{c:>w$}"))
        .collect::<Vec<_>>()
        .join("  ")
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let header: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    let mut out = row(&header, &widths);
    out.push('\n');
    for r in rows {
        out.push_str(&row(r, &widths));
        out.push('\n');
    }
    out
}

pub fn render_report(report: &MetricReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => render_text(report),
        ReportFormat::Kv => render_kv(report),
    }
}

fn render_text(r: &MetricReport) -> String {
    let c = &r.counts;
    let mut out = table(
        &["COV", "ACC", "CWA", "MIS"],
        &[vec![r.cov.to_string(), r.acc.to_string(), r.cwa.to_string(), r.mis.to_string()]],
    );
    out.push('\n');
    out.push_str(&format!(
        "entries {}  unparseable {} ({}%)\nannotations {}  matched {}  correct {}  found {}\n",
        c.entries, c.unparseable, r.unparseable_rate, c.totals.annotations, c.totals.matched, c.totals.correct, c.totals.found
    ));
    if !c.breakdown.is_empty() {
        out.push('\n');
        let rows: Vec<Vec<String>> = c
            .breakdown
            .iter()
            .map(|((k, n), cell)| {
                let pct = |num, den| if den == 0 { "-".to_string() } else { Percent::from_ratio(num, den).to_string() };
                vec![
                    k.to_string(),
                    n.to_string(),
                    cell.annotations.to_string(),
                    pct(cell.matched, cell.annotations),
                    pct(cell.correct, cell.matched),
                ]
            })
            .collect();
        out.push_str(&table(&["kind", "number", "n", "COV", "ACC"], &rows));
    }
    out
}

fn render_kv(r: &MetricReport) -> String {
    let c = &r.counts;
    let mut lines = vec![
        format!("cov={}", r.cov),
        format!("acc={}", r.acc),
        format!("cwa={}", r.cwa),
        format!("mis={}", r.mis),
        format!("unparseable_rate={}", r.unparseable_rate),
        format!("entries={}", c.entries),
        format!("unparseable={}", c.unparseable),
    ];
    let counters = |prefix: &str, k: &Counters, lines: &mut Vec<String>| {
        lines.push(format!("{prefix}annotations={}", k.annotations));
        lines.push(format!("{prefix}matched={}", k.matched));
        lines.push(format!("{prefix}correct={}", k.correct));
        lines.push(format!("{prefix}found={}", k.found));
    };
    counters("", &c.totals, &mut lines);
    for ((k, n), cell) in &c.breakdown {
        counters(&format!("breakdown.{k}.{n}."), cell, &mut lines);
    }
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
/// Later keys overwrite earlier ones.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>, ReportError> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ReportError::Malformed {
            line: i + 1,
            message: format!("expected key=value, got {line:?}"),
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn take<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<T, ReportError>
where
    T::Err: std::fmt::Display,
{
    let v = map.get(key).ok_or_else(|| ReportError::MissingKey(key.to_string()))?;
    v.parse().map_err(|e: T::Err| ReportError::Malformed {
        line: 0,
        message: format!("{key}: {e}"),
    })
}

/// Reads back the output of `render_report(_, ReportFormat::Kv)`.
pub fn parse_report_kv(text: &str) -> Result<MetricReport, ReportError> {
    let map = parse_kv(text)?;
    let counters = |prefix: &str| -> Result<Counters, ReportError> {
        Ok(Counters {
            annotations: take(&map, &format!("{prefix}annotations"))?,
            matched: take(&map, &format!("{prefix}matched"))?,
            correct: take(&map, &format!("{prefix}correct"))?,
            found: take(&map, &format!("{prefix}found"))?,
        })
    };
    let mut breakdown = BTreeMap::new();
    for k in KINDS {
        for n in NUMBERS {
            let prefix = format!("breakdown.{k}.{n}.");
            if map.contains_key(&format!("{prefix}annotations")) {
                breakdown.insert((k, n), counters(&prefix)?);
            }
        }
    }
    Ok(MetricReport {
        cov: take(&map, "cov")?,
        acc: take(&map, "acc")?,
        cwa: take(&map, "cwa")?,
        mis: take(&map, "mis")?,
        unparseable_rate: take(&map, "unparseable_rate")?,
        counts: EvalCounts {
            totals: counters("")?,
            breakdown,
            entries: take(&map, "entries")?,
            unparseable: take(&map, "unparseable")?,
        },
    })
}

/// Everything needed to reproduce a report: inputs, paradigm, and the
/// prompt and client settings as flat `prompt.*` / `client.*` keys.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunManifest {
    pub command: String,
    pub corpus: String,
    pub paradigm: String,
    pub out_dir: String,
    pub tool_version: String,
    pub settings: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn to_kv(&self) -> String {
        let mut out = format!(
            "command={}\ncorpus={}\nparadigm={}\nout_dir={}\ntool_version={}\n",
            self.command, self.corpus, self.paradigm, self.out_dir, self.tool_version
        );
        for (k, v) in &self.settings {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }

    pub fn from_kv(text: &str) -> Result<Self, ReportError> {
        let mut map = parse_kv(text)?;
        let mut field = |key: &str| map.remove(key).ok_or_else(|| ReportError::MissingKey(key.to_string()));
        Ok(RunManifest {
            command: field("command")?,
            corpus: field("corpus")?,
            paradigm: field("paradigm")?,
            out_dir: field("out_dir")?,
            tool_version: field("tool_version")?,
            settings: map,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::compute_metrics;

    fn gpt4_row() -> MetricReport {
        let mut r = compute_metrics(&EvalCounts {
            totals: Counters {
                annotations: 2479,
                matched: 1415,
                correct: 1056,
                found: 2191,
            },
            entries: 841,
            unparseable: 3,
            ..Default::default()
        })
        .unwrap();
        r.mis = Percent(4578);
        r
    }

    #[test]
    fn text_row() {
        let text = render_report(&gpt4_row(), ReportFormat::Text);
        assert_eq!(text.lines().nth(1), Some("57.08  74.63  42.60  45.78"));
    }

    #[test]
    fn all_zero_row() {
        let r = compute_metrics(&EvalCounts {
            totals: Counters {
                annotations: 5,
                ..Default::default()
            },
            entries: 1,
            ..Default::default()
        })
        .unwrap();
        let text = render_report(&r, ReportFormat::Text);
        assert_eq!(text.lines().nth(1), Some("0.00  0.00  0.00  0.00"));
    }

    #[test]
    fn kv_round_trip() {
        let mut r = gpt4_row();
        r.counts.breakdown.insert(
            (Kind::Function, Number::Plural),
            Counters {
                annotations: 4,
                matched: 3,
                correct: 1,
                found: 0,
            },
        );
        let kv = render_report(&r, ReportFormat::Kv);
        assert!(kv.starts_with("cov=57.08\nacc=74.63\ncwa=42.60\nmis=45.78\n"));
        assert_eq!(parse_report_kv(&kv).unwrap(), r);
    }

    #[test]
    fn kv_errors() {
        assert_eq!(parse_report_kv("cov=1.00\n"), Err(ReportError::MissingKey("acc".into())));
        assert!(matches!(parse_kv("no equals"), Err(ReportError::Malformed { line: 1, .. })));
    }

    #[test]
    fn manifest_round_trip() {
        let mut m = RunManifest {
            command: "evaluate".into(),
            corpus: "test.tsv".into(),
            paradigm: "schwa".into(),
            out_dir: "out".into(),
            tool_version: "0.1.0".into(),
            ..Default::default()
        };
        m.settings.insert("client.temperature".into(), "0".into());
        m.settings.insert("prompt.format".into(), "ternary".into());
        assert_eq!(RunManifest::from_kv(&m.to_kv()).unwrap(), m);
    }
}
