//! Check records and suite reports.
//!
//! Every verification suite produces a flat list of [`CheckRecord`]s — one
//! per identity instance checked — which serializes to JSON Lines for
//! machine consumption and to a grouped text summary for humans. A failing
//! record carries the rendered mismatch (both sides) in `detail`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckRecord {
    /// Which suite produced this record (e.g. "axioms", "affine").
    pub suite: String,
    /// The algebra or ring the check ran in.
    pub algebra: String,
    /// The identity or property checked.
    pub check: String,
    /// Rendered inputs (elements and integer parameters).
    pub inputs: String,
    pub pass: bool,
    /// On failure: both sides of the identity, or a diagnostic.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn pass(suite: &str, algebra: &str, check: &str, inputs: String) -> Self {
        CheckRecord {
            suite: suite.to_string(),
            algebra: algebra.to_string(),
            check: check.to_string(),
            inputs,
            pass: true,
            detail: None,
        }
    }

    pub fn fail(suite: &str, algebra: &str, check: &str, inputs: String, detail: String) -> Self {
        CheckRecord {
            suite: suite.to_string(),
            algebra: algebra.to_string(),
            check: check.to_string(),
            inputs,
            pass: false,
            detail: Some(detail),
        }
    }

    /// Build from a checker outcome.
    pub fn from_result<E: std::fmt::Display>(
        suite: &str,
        algebra: &str,
        check: &str,
        inputs: String,
        result: Result<(), E>,
    ) -> Self {
        match result {
            Ok(()) => Self::pass(suite, algebra, check, inputs),
            Err(e) => Self::fail(suite, algebra, check, inputs, format!("{e}")),
        }
    }
}

/// A list of check records with summary helpers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteReport {
    pub records: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }

    pub fn extend(&mut self, other: SuiteReport) {
        self.records.extend(other.records);
    }

    pub fn total(&self) -> usize {
        self.records.len()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn fail_count(&self) -> usize {
        self.failures().count()
    }

    pub fn all_pass(&self) -> bool {
        self.fail_count() == 0
    }

    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(s: &str) -> Result<Self, serde_json::Error> {
        let mut records = Vec::new();
        for line in s.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            records.push(serde_json::from_str(line)?);
        }
        Ok(SuiteReport { records })
    }

    /// Grouped human-readable summary: per (suite, algebra, check) line with
    /// pass counts, then details of every failure.
    pub fn text_summary(&self) -> String {
        use std::collections::BTreeMap;
        let mut groups: BTreeMap<(String, String, String), (usize, usize)> = BTreeMap::new();
        for r in &self.records {
            let key = (r.suite.clone(), r.algebra.clone(), r.check.clone());
            let e = groups.entry(key).or_insert((0, 0));
            e.0 += 1;
            if !r.pass {
                e.1 += 1;
            }
        }
        let mut out = String::new();
        for ((suite, algebra, check), (total, failed)) in &groups {
            let status = if *failed == 0 { "ok" } else { "FAIL" };
            out.push_str(&format!(
                "[{status}] {suite} :: {algebra} :: {check} — {}/{total} passed\n",
                total - failed
            ));
        }
        for r in self.failures() {
            out.push_str(&format!(
                "  FAIL {} :: {} :: {} at {}\n       {}\n",
                r.suite,
                r.algebra,
                r.check,
                r.inputs,
                r.detail.as_deref().unwrap_or("(no detail)")
            ));
        }
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.total(),
            self.fail_count()
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_round_trip() {
        let mut rep = SuiteReport::new();
        rep.push(CheckRecord::pass("axioms", "S_2", "leibniz", "x=t, y=t^2, n=1".into()));
        rep.push(CheckRecord::fail(
            "axioms",
            "S_2",
            "borcherds",
            "m=0,n=0,p=0".into(),
            "lhs = 1 ; rhs = 0".into(),
        ));
        let text = rep.to_jsonl();
        assert_eq!(text.lines().count(), 2);
        let back = SuiteReport::from_jsonl(&text).unwrap();
        assert_eq!(back, rep);
        assert!(!back.all_pass());
        assert_eq!(back.fail_count(), 1);
    }

    #[test]
    fn summary_groups() {
        let mut rep = SuiteReport::new();
        for i in 0..3 {
            rep.push(CheckRecord::pass("s", "a", "c", format!("i={i}")));
        }
        rep.push(CheckRecord::fail("s", "a", "d", "x".into(), "boom".into()));
        let sum = rep.text_summary();
        assert!(sum.contains("[ok] s :: a :: c — 3/3 passed"));
        assert!(sum.contains("[FAIL] s :: a :: d — 0/1 passed"));
        assert!(sum.contains("4 checks, 1 failed"));
    }
}
