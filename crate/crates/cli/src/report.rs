use fgverify_core::check::{CheckKind, CheckResult};
use serde::Serialize;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Record {
    pub name: String,
    pub reference: String,
    pub kind: &'static str,
    pub samples: usize,
    /// Max residual, min gap, or the reported value.
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl From<&CheckResult> for Record {
    fn from(c: &CheckResult) -> Self {
        Record {
            name: c.name.clone(),
            reference: c.reference.clone(),
            kind: match c.kind {
                CheckKind::Residual => "residual",
                CheckKind::Gap => "gap",
                CheckKind::Info => "info",
            },
            samples: c.samples(),
            value: c.value,
            tolerance: c.tolerance,
            pass: c.passed(),
            notes: c.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub informational: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub scenario: String,
    pub version: &'static str,
    pub seed: u64,
    pub samples: usize,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn new(scenario: &str, seed: u64, samples: usize, checks: &[CheckResult]) -> Report {
        let records: Vec<Record> = checks.iter().map(Record::from).collect();
        let informational = records.iter().filter(|r| r.kind == "info").count();
        let failed = records.iter().filter(|r| !r.pass).count();
        let summary =
            Summary { total: records.len(), passed: records.len() - informational - failed, failed, informational };
        Report { scenario: scenario.to_string(), version: VERSION, seed, samples, records, summary }
    }

    /// True when every non-informational record passes.
    pub fn success(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per record and a closing tally.
    pub fn human(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let tag = match (r.kind, r.pass) {
                ("info", _) => "INFO",
                (_, true) => "PASS",
                _ => "FAIL",
            };
            if r.kind == "info" {
                out.push_str(&format!("{tag}  {}  value={:.3e}\n", r.name, r.value));
            } else {
                out.push_str(&format!(
                    "{tag}  {}  value={:.3e}  tol={:.1e}  n={}\n",
                    r.name, r.value, r.tolerance, r.samples
                ));
            }
            for n in &r.notes {
                out.push_str(&format!("      note: {n}\n"));
            }
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{}: {} checks, {} passed, {} failed, {} informational\n",
            self.scenario, s.total, s.passed, s.failed, s.informational
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_counts_match_records() {
        let checks = vec![
            CheckResult::residual("a", "x = 0", vec![1e-12], 1e-9),
            CheckResult::residual("b", "x = 0", vec![1.0], 1e-9),
            CheckResult::gap("c", "x >= 0", vec![0.5], 1e-6),
            CheckResult::info("d", "x", 3.0),
        ];
        let r = Report::new("t", 1, 1, &checks);
        assert_eq!(r.summary, Summary { total: 4, passed: 2, failed: 1, informational: 1 });
        assert!(!r.success());
    }

    #[test]
    fn keys_keep_schema_order() {
        let r = Report::new("t", 1, 1, &[CheckResult::residual("a", "x = 0", vec![0.0], 1e-9)]);
        let json = r.to_json();
        let order = [
            "\"scenario\"",
            "\"version\"",
            "\"seed\"",
            "\"samples\"",
            "\"records\"",
            "\"name\"",
            "\"reference\"",
            "\"kind\"",
            "\"value\"",
            "\"tolerance\"",
            "\"pass\"",
            "\"notes\"",
            "\"summary\"",
        ];
        let pos: Vec<usize> = order.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{json}");
    }

    #[test]
    fn nan_serializes_as_null_and_fails() {
        let r = Report::new("t", 1, 1, &[CheckResult::residual("a", "x = 0", vec![f64::NAN], 1e-9)]);
        assert!(r.to_json().contains("\"value\": null"));
        assert!(!r.success());
    }
}
