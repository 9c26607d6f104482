//! Machine-readable run reports.
//!
//! The JSON layout is versioned and deterministic: map keys are sorted,
//! check order follows execution order, and the only time-dependent value
//! (the timestamp) lives in the header so consumers can diff reports by
//! dropping a single field.

use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub tool: String,
    pub timestamp: String,
    pub seed: u64,
}

/// A concrete point where a residual failed to vanish.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub q: f64,
    pub value_re: f64,
    pub value_im: f64,
}

impl Witness {
    pub fn new(q: f64, value: Complex64) -> Self {
        Witness {
            q,
            value_re: value.re,
            value_im: value.im,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// Short statement of the identity or property being checked.
    pub paper_ref: String,
    pub verdict: Verdict,
    pub max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub params: BTreeMap<String, serde_json::Value>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, statement: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            paper_ref: statement.into(),
            verdict: Verdict::Pass,
            max_residual: 0.0,
            witness: None,
            params: BTreeMap::new(),
        }
    }

    pub fn with_verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }

    pub fn with_residual(mut self, r: f64) -> Self {
        self.max_residual = r;
        self
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub header: Header,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(seed: u64) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            header: Header {
                tool: format!("nfoldsusy {}", env!("CARGO_PKG_VERSION")),
                timestamp: now_utc(),
                seed,
            },
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.checks.push(check);
    }

    /// True when no check failed or errored.
    pub fn passes(&self) -> bool {
        self.checks
            .iter()
            .all(|c| matches!(c.verdict, Verdict::Pass | Verdict::NotApplicable))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// One human-readable line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::NotApplicable => "N/A ",
                Verdict::Error => "ERR ",
            };
            out.push_str(&format!(
                "{tag} {:<40} max residual {:.3e}\n",
                c.name, c.max_residual
            ));
        }
        out
    }
}

/// ISO-8601 UTC timestamp without pulling in a date-time dependency.
fn now_utc() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    // days since epoch -> civil date (Howard Hinnant's algorithm)
    let days = (secs / 86_400) as i64;
    let rem = secs % 86_400;
    let (h, m, s) = (rem / 3600, (rem % 3600) / 60, rem % 60);
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = doy - (153 * mp + 2) / 5 + 1;
    let month = if mp < 10 { mp + 3 } else { mp - 9 };
    let year = if month <= 2 { y + 1 } else { y };
    format!("{year:04}-{month:02}-{d:02}T{h:02}:{m:02}:{s:02}Z")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips_and_flags_failures() {
        let mut report = Report::new(7);
        report.push(CheckRecord::new("a", "identity").with_residual(1e-12));
        assert!(report.passes());
        report.push(
            CheckRecord::new("b", "identity")
                .with_verdict(Verdict::Fail)
                .with_residual(0.5)
                .with_witness(Witness::new(1.0, Complex64::new(0.5, 0.0))),
        );
        assert!(!report.passes());
        let json = report.to_json();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["schema_version"], 1);
        assert_eq!(parsed["checks"][1]["verdict"], "fail");
        assert_eq!(parsed["checks"][1]["witness"]["q"], 1.0);
        assert!(parsed["checks"][0]["witness"].is_null());
    }

    #[test]
    fn timestamp_shape() {
        let t = now_utc();
        assert_eq!(t.len(), 20, "{t}");
        assert!(t.starts_with("20"), "{t}");
        assert!(t.ends_with('Z'));
    }

    #[test]
    fn identical_reports_differ_only_in_timestamp() {
        let a = Report::new(7).to_json();
        let b = Report::new(7).to_json();
        let strip = |s: &str| -> String {
            s.lines()
                .filter(|l| !l.contains("timestamp"))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(strip(&a), strip(&b));
    }
}
