//! Batch scanning of graph6 streams.
//!
//! Whole graphs are farmed out to a worker pool; results come back in input
//! order, so the report is identical for any number of jobs.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::construct::{construct_certificate, ConstructOptions};
use crate::graph::Graph;
use crate::oracle::{bounds_for, local_metric_dimension_with, BoundReport, DEFAULT_EXACT_CAP};
use crate::par::{with_jobs, Execution};
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BatchConfig {
    pub exact_cap: usize,
    pub jobs: usize,
    pub options: ConstructOptions,
}

impl Default for BatchConfig {
    fn default() -> Self {
        BatchConfig { exact_cap: DEFAULT_EXACT_CAP, jobs: 1, options: ConstructOptions::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LineStatus {
    Ok,
    /// Parsed, but outside the constructor's contract (or the construction failed).
    Skipped,
    ParseError,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateSummary {
    #[serde(rename = "W")]
    pub w: VertexSet,
    pub size: usize,
    pub bound: usize,
    pub bound_ok: bool,
    pub repair_performed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchRecord {
    /// 1-based line number in the input.
    pub line: usize,
    pub graph6: String,
    pub status: LineStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BatchSummary {
    pub lines: usize,
    pub graphs: usize,
    pub parse_errors: usize,
    pub skipped: usize,
    pub certified: usize,
    pub bound_ok: usize,
    pub repairs: usize,
    pub exact_computed: usize,
    /// Certificates whose size exceeds the exact dimension (not a violation, just slack).
    pub certificate_above_dim: usize,
    /// Graphs with `dim_l = floor(n/2)` among the certified ones.
    pub tight_half: usize,
    /// Per bound check: how many graphs met it with equality.
    pub tight: BTreeMap<String, usize>,
    /// Per bound check: how many graphs violated it.
    pub violations: BTreeMap<String, usize>,
}

impl BatchSummary {
    /// True if no certificate failed and no proven bound was violated.
    ///
    /// Violations of the open `clique-conjecture` check are reported but do not count here.
    pub fn clean(&self) -> bool {
        self.repairs == 0
            && self.bound_ok == self.certified
            && self.violations.keys().all(|k| k == "clique-conjecture")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchReport {
    pub records: Vec<BatchRecord>,
    pub summary: BatchSummary,
}

impl BatchReport {
    /// JSON lines: one per record, then the summary wrapped as `{"summary": ...}`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serialises"));
            out.push('\n');
        }
        let summary = serde_json::json!({ "summary": self.summary });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}

fn process_line(line: usize, text: &str, cfg: &BatchConfig) -> BatchRecord {
    let mut rec = BatchRecord {
        line,
        graph6: text.to_string(),
        status: LineStatus::Ok,
        reason: None,
        n: None,
        omega: None,
        certificate: None,
        dim_l: None,
        bounds: None,
    };
    let g = match Graph::from_graph6(text) {
        Ok(g) => g,
        Err(e) => {
            rec.status = LineStatus::ParseError;
            rec.reason = Some(e.to_string());
            return rec;
        }
    };
    rec.n = Some(g.n());
    rec.omega = Some(g.clique_number());

    match construct_certificate(&g, &cfg.options) {
        Ok(c) => {
            rec.certificate = Some(CertificateSummary {
                w: c.w,
                size: c.w.len(),
                bound: c.bound,
                bound_ok: c.bound_ok,
                repair_performed: c.repair_performed,
            })
        }
        Err(e) => {
            rec.status = LineStatus::Skipped;
            rec.reason = Some(e.to_string());
        }
    }

    // The exact search already runs inside a worker, so it stays sequential here.
    if g.is_connected() && g.n() <= cfg.exact_cap {
        if let Ok((dim, witness)) = local_metric_dimension_with(&g, cfg.exact_cap, Execution::Sequential) {
            rec.dim_l = Some(dim);
            rec.bounds = Some(bounds_for(&g, dim, witness));
        }
    }
    rec
}

fn summarize(records: &[BatchRecord]) -> BatchSummary {
    let mut s = BatchSummary { lines: records.len(), ..BatchSummary::default() };
    for r in records {
        match r.status {
            LineStatus::ParseError => {
                s.parse_errors += 1;
                continue;
            }
            LineStatus::Skipped => s.skipped += 1,
            LineStatus::Ok => {}
        }
        s.graphs += 1;
        if let Some(c) = &r.certificate {
            s.certified += 1;
            s.bound_ok += c.bound_ok as usize;
            s.repairs += c.repair_performed as usize;
            if let Some(d) = r.dim_l {
                s.certificate_above_dim += (c.size > d) as usize;
                s.tight_half += (d == c.bound) as usize;
            }
        }
        if let Some(b) = &r.bounds {
            s.exact_computed += 1;
            for check in &b.checks {
                if check.tight {
                    *s.tight.entry(check.name.to_string()).or_default() += 1;
                }
                if !check.holds {
                    *s.violations.entry(check.name.to_string()).or_default() += 1;
                }
            }
        }
    }
    s
}

/// Processes every non-blank line of `input` as one graph6 string.
pub fn run_batch(input: &str, cfg: &BatchConfig) -> BatchReport {
    let lines: Vec<(usize, &str)> = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let records = with_jobs(cfg.jobs, || Execution::Parallel.map(&lines, |&(i, l)| process_line(i, l, cfg)));
    let summary = summarize(&records);
    BatchReport { records, summary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::named_graph;

    fn g6(name: &str) -> String {
        named_graph(name).unwrap().to_graph6().unwrap()
    }

    #[test]
    fn empty_input_gives_zero_summary() {
        let r = run_batch("", &BatchConfig::default());
        assert!(r.records.is_empty());
        assert_eq!(r.summary, BatchSummary::default());
        assert_eq!(r.to_jsonl().lines().count(), 1);
    }

    #[test]
    fn k4_line_is_skipped_with_reason() {
        let input = format!("{}\n{}\n", g6("C5"), g6("K4"));
        let r = run_batch(&input, &BatchConfig::default());
        assert_eq!(r.records[0].status, LineStatus::Ok);
        assert_eq!(r.records[1].status, LineStatus::Skipped);
        assert!(r.records[1].reason.as_deref().unwrap().contains("contains K4"));
        assert_eq!(r.records[1].dim_l, Some(3));
        assert_eq!((r.summary.graphs, r.summary.skipped, r.summary.certified), (2, 1, 1));
    }

    #[test]
    fn parse_errors_are_counted() {
        let input = format!("{}\n\n@@@\n", g6("paw"));
        let r = run_batch(&input, &BatchConfig::default());
        assert_eq!(r.summary.lines, 2);
        assert_eq!(r.summary.parse_errors, 1);
        assert_eq!(r.records[1].line, 3);
        assert_eq!(r.records[1].status, LineStatus::ParseError);
    }

    #[test]
    fn exact_cap_respected() {
        let cfg = BatchConfig { exact_cap: 4, ..BatchConfig::default() };
        let r = run_batch(&g6("C5"), &cfg);
        assert_eq!(r.records[0].dim_l, None);
        assert!(r.records[0].certificate.is_some());
    }

    #[test]
    fn output_independent_of_jobs() {
        let input: String = ["C5", "paw", "diamond", "friendship:3", "petersen", "K3,3", "C7"]
            .iter()
            .map(|n| g6(n) + "\n")
            .collect();
        let one = run_batch(&input, &BatchConfig { jobs: 1, ..BatchConfig::default() }).to_jsonl();
        let many = run_batch(&input, &BatchConfig { jobs: 8, ..BatchConfig::default() }).to_jsonl();
        assert_eq!(one, many);
    }
}
