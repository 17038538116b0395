//! Machine-readable run reports: one [`Report`] per suite or lattice
//! experiment, serialized to JSON (and CSV for tabular experiment output).
//! Reports are deterministic except for the `timestamp` field.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Identity holds (symbolic: difference canonicalizes to zero;
    /// numeric: residual under tolerance).
    Pass,
    /// Identity fails; `residual` carries the witness.
    Fail,
    /// The case could not be evaluated (parse error, degenerate solve, ...).
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub name: String,
    pub verdict: Verdict,
    /// Symbolic cases: pretty-printed nonzero difference. Numeric cases:
    /// the measured residual as a decimal string.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    /// Human-readable statements of what was checked, with conventions.
    pub citations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub timestamp: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub cases: Vec<CaseOutcome>,
    pub environment: Environment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub package: String,
    pub version: String,
    pub platform: String,
}

impl Environment {
    pub fn current() -> Self {
        Environment {
            package: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            platform: std::env::consts::OS.to_string(),
        }
    }
}

impl Report {
    pub fn new(suite: impl Into<String>, seed: Option<u64>, cases: Vec<CaseOutcome>) -> Self {
        Report {
            suite: suite.into(),
            timestamp: now_rfc3339(),
            seed,
            cases,
            environment: Environment::current(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(|c| c.verdict == Verdict::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Equality ignoring the timestamp, for determinism checks.
    pub fn same_content(&self, other: &Report) -> bool {
        let mut a = self.clone();
        let mut b = other.clone();
        a.timestamp.clear();
        b.timestamp.clear();
        a == b
    }

    /// Plain-text rendering: one line per case.
    pub fn to_text(&self) -> String {
        let mut out = format!("suite {}\n", self.suite);
        for c in &self.cases {
            let verdict = match c.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Error => "ERROR",
            };
            match &c.residual {
                Some(r) => out.push_str(&format!("  {:<28} {:5}  residual: {}\n", c.name, verdict, r)),
                None => out.push_str(&format!("  {:<28} {}\n", c.name, verdict)),
            }
        }
        out
    }

    /// CSV rendering with a fixed column order.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["suite", "case", "verdict", "residual"])
            .expect("csv header");
        for c in &self.cases {
            let verdict = match c.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
                Verdict::Error => "error",
            };
            w.write_record([
                self.suite.as_str(),
                c.name.as_str(),
                verdict,
                c.residual.as_deref().unwrap_or(""),
            ])
            .expect("csv row");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf8")
    }
}

/// UTC timestamp without pulling in a clock crate: seconds since the epoch
/// rendered through a minimal civil-date conversion.
fn now_rfc3339() -> String {
    use std::time::{SystemTime, UNIX_EPOCH};
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let days = secs / 86_400;
    let (y, m, d) = civil_from_days(days as i64);
    let rem = secs % 86_400;
    format!(
        "{y:04}-{m:02}-{d:02}T{:02}:{:02}:{:02}Z",
        rem / 3600,
        (rem % 3600) / 60,
        rem % 60
    )
}

/// Howard Hinnant's days-to-civil algorithm.
fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    (if m <= 2 { y + 1 } else { y }, m, d)
}
