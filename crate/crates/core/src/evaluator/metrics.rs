use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::matcher::{EntryEval, Outcome};
use super::EvalError;
use crate::paradigm::{Kind, Number};

/// Raw counters behind the metrics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub annotations: u64,
    pub matched: u64,
    pub correct: u64,
    pub found: u64,
}

impl std::ops::AddAssign for Counters {
    fn add_assign(&mut self, o: Counters) {
        self.annotations += o.annotations;
        self.matched += o.matched;
        self.correct += o.correct;
        self.found += o.found;
    }
}

/// Corpus-level sums of per-entry counters.
///
/// Breakdowns by (kind, number) carry `annotations`, `matched` and
/// `correct`; `found` is a token-level count with no triplet to attribute
/// it to, so it is zero in every breakdown cell.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalCounts {
    pub totals: Counters,
    pub breakdown: BTreeMap<(Kind, Number), Counters>,
    pub entries: u64,
    pub unparseable: u64,
}

pub fn aggregate(evals: &[EntryEval]) -> EvalCounts {
    let mut counts = EvalCounts::default();
    for e in evals {
        counts.entries += 1;
        counts.unparseable += e.unparseable as u64;
        counts.totals += Counters {
            annotations: e.annotations,
            matched: e.matched,
            correct: e.correct,
            found: e.found,
        };
        for t in &e.per_triplet {
            let cell = counts.breakdown.entry((t.kind, t.number)).or_default();
            cell.annotations += 1;
            if t.outcome != Outcome::Unmatched {
                cell.matched += 1;
            }
            if t.outcome == Outcome::MatchedNeo {
                cell.correct += 1;
            }
        }
    }
    counts
}

/// A percentage stored as an integer number of hundredths.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Percent(pub i64);

impl Percent {
    /// `100 * num / den`, rounded half-up to two decimals. `den` must be > 0.
    pub fn from_ratio(num: u64, den: u64) -> Percent {
        assert!(den > 0, "zero denominator");
        let (num, den) = (num as u128, den as u128);
        Percent(((num * 20_000 + den) / (2 * den)) as i64)
    }

    /// Product of two percentages divided by 100, rounded half-up.
    pub fn scaled_product(a: Percent, b: Percent) -> Percent {
        // a*b is in units of 1e-4 %^2; /100 and back to hundredths => /10_000
        let p = a.0 as i128 * b.0 as i128;
        let sign = if p < 0 { -1 } else { 1 };
        Percent((sign * ((p.abs() + 5_000) / 10_000)) as i64)
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let s = format!("{sign}{}.{:02}", self.0.abs() / 100, self.0.abs() % 100);
        f.pad(&s)
    }
}

impl FromStr for Percent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() || frac.len() > 2 || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(format!("not a 2-decimal percentage: {s:?}"));
        }
        let int: i64 = int.parse().map_err(|_| format!("out of range: {s:?}"))?;
        let frac: i64 = format!("{frac:0<2}").parse().unwrap_or(0);
        let v = int * 100 + frac;
        Ok(Percent(if neg { -v } else { v }))
    }
}

/// A metric as an exact fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn percent(self) -> Percent {
        Percent::from_ratio(self.num, self.den)
    }

    /// Unrounded percentage.
    pub fn as_percent_f64(self) -> f64 {
        100.0 * self.num as f64 / self.den as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricReport {
    pub cov: Percent,
    pub acc: Percent,
    pub cwa: Percent,
    pub mis: Percent,
    pub unparseable_rate: Percent,
    pub counts: EvalCounts,
}

impl MetricReport {
    /// Exact (cov, acc, cwa, mis) fractions. When nothing matched, ACC and
    /// CWA are 0/1.
    pub fn ratios(&self) -> [Ratio; 4] {
        ratios(&self.counts.totals)
    }
}

fn ratios(c: &Counters) -> [Ratio; 4] {
    let a = c.annotations;
    let cov = Ratio { num: c.matched, den: a };
    let (acc, cwa) = if c.matched == 0 {
        (Ratio { num: 0, den: 1 }, Ratio { num: 0, den: 1 })
    } else {
        // (correct/matched) * (matched/annotations) = correct/annotations
        (Ratio { num: c.correct, den: c.matched }, Ratio { num: c.correct, den: a })
    };
    let mis = Ratio {
        num: c.found.saturating_sub(c.correct),
        den: a,
    };
    [cov, acc, cwa, mis]
}

/// COV = matched/annotations, ACC = correct/matched,
/// CWA = ACC * COV, MIS = (found - correct)/annotations; all as percentages
/// rounded half-up to two decimals.
pub fn compute_metrics(counts: &EvalCounts) -> Result<MetricReport, EvalError> {
    let c = &counts.totals;
    if c.annotations == 0 {
        return Err(EvalError::NoAnnotations);
    }
    debug_assert!(c.correct <= c.matched && c.matched <= c.annotations && c.correct <= c.found);
    let [cov, acc, cwa, mis] = ratios(c);
    let unparseable_rate = if counts.entries == 0 {
        Percent(0)
    } else {
        Percent::from_ratio(counts.unparseable, counts.entries)
    };
    Ok(MetricReport {
        cov: cov.percent(),
        acc: acc.percent(),
        cwa: cwa.percent(),
        mis: mis.percent(),
        unparseable_rate,
        counts: counts.clone(),
    })
}
