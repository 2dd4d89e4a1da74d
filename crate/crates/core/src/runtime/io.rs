//! Trace files: JSON lines, a flat CSV, a budget series and a summary.

use serde::{Deserialize, Serialize};

use super::{TraceRecord, Verdict};
use crate::rational::{self, to_f64};

pub fn trace_jsonl(trace: &[TraceRecord]) -> String {
    trace
        .iter()
        .map(|r| serde_json::to_string(r).expect("trace record serializes") + "\n")
        .collect()
}

pub fn trace_from_jsonl(s: &str) -> Result<Vec<TraceRecord>, serde_json::Error> {
    s.lines().filter(|l| !l.trim().is_empty()).map(serde_json::from_str).collect()
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 csv")
}

/// Columns `step, vertex, bid1, bid2, winner, budget1`, values before the step.
pub fn trace_csv(trace: &[TraceRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["step", "vertex", "bid1", "bid2", "winner", "budget1"]).expect("in-memory write");
    for r in trace {
        w.write_record([
            r.step.to_string(),
            r.config_before.vertex.clone(),
            rational::format(&r.bid_1),
            rational::format(&r.bid_2),
            r.winner.number().to_string(),
            rational::format(&r.config_before.budget_1),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

/// One row per configuration, exact and as floats.
pub fn budget_series_csv(trace: &[TraceRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["step", "vertex", "budget1", "budget2", "budget1_f64", "budget2_f64"])
        .expect("in-memory write");
    let configs = trace
        .iter()
        .map(|r| (r.step, &r.config_before))
        .chain(trace.last().map(|r| (r.step + 1, &r.config_after)));
    for (step, c) in configs {
        let b2 = c.budget_2();
        w.write_record([
            step.to_string(),
            c.vertex.clone(),
            rational::format(&c.budget_1),
            rational::format(&b2),
            to_f64(&c.budget_1).to_string(),
            to_f64(&b2).to_string(),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub steps: usize,
    pub final_vertex: String,
    #[serde(with = "rational::serde_str")]
    pub final_budget_1: rational::Rational,
    pub verdicts: Vec<Verdict>,
}

impl RunSummary {
    pub fn new(initial_vertex: &str, initial_budget_1: &rational::Rational, trace: &[TraceRecord], verdicts: Vec<Verdict>) -> Self {
        let (final_vertex, final_budget_1) = match trace.last() {
            Some(r) => (r.config_after.vertex.clone(), r.config_after.budget_1.clone()),
            None => (initial_vertex.to_string(), initial_budget_1.clone()),
        };
        RunSummary {
            steps: trace.len(),
            final_vertex,
            final_budget_1,
            verdicts,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}
