//! Verification reports: counts, budget, status and certificates, emitted
//! as canonical JSON so that equal inputs give equal bytes.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::io::to_canonical_string;

/// Certificates kept per report; failures are always kept ahead of passes.
pub const MAX_CERTIFICATES: usize = 16;
/// Passing cases that contribute a positive certificate.
pub const POSITIVE_SAMPLES: usize = 3;

/// Size limits for seeded instances: number of cases, largest module
/// dimension, longest complex window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub cases: usize,
    pub dim: usize,
    pub window: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            cases: 40,
            dim: 3,
            window: 3,
        }
    }
}

impl FromStr for Budget {
    type Err = Error;

    /// `cases=N,dim=D,window=W`; omitted keys keep their defaults.
    fn from_str(s: &str) -> Result<Self> {
        let mut b = Self::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("budget entry `{part}` is not key=value")))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("budget value `{v}` is not a nonnegative integer")))?;
            match k.trim() {
                "cases" => b.cases = v,
                "dim" => b.dim = v,
                "window" => b.window = v,
                other => return Err(Error::InvalidInput(format!("unknown budget key `{other}`"))),
            }
        }
        if b.dim == 0 || b.window == 0 {
            return Err(Error::InvalidInput("budget dim and window must be positive".into()));
        }
        Ok(b)
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cases={},dim={},window={}", self.cases, self.dim, self.window)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Falsified,
    Inconclusive,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Falsified => "FALSIFIED",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Skip => "SKIP",
        })
    }
}

/// One evaluated instance.
#[derive(Clone, Debug)]
pub enum Case {
    Pass(Option<Value>),
    Fail(Value),
    /// Hypothesis not met; the reason is counted, not stored.
    Skip,
    /// Could not be decided within the caps.
    Undecided(Value),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub theorem_id: String,
    pub algebra: String,
    pub budget: Budget,
    pub seed: u64,
    pub status: Status,
    pub cases_run: usize,
    pub cases_passed: usize,
    pub skips: usize,
    pub notes: Vec<String>,
    pub certificates: Vec<Value>,
}

impl Report {
    pub fn new(theorem_id: &str, algebra: &str, budget: Budget, seed: u64) -> Self {
        Self {
            theorem_id: theorem_id.to_string(),
            algebra: algebra.to_string(),
            budget,
            seed,
            status: Status::Skip,
            cases_run: 0,
            cases_passed: 0,
            skips: 0,
            notes: Vec::new(),
            certificates: Vec::new(),
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Tallies cases in their given order. Failure certificates always
    /// precede positive samples.
    pub fn absorb(&mut self, cases: impl IntoIterator<Item = Case>) -> &mut Self {
        let mut failures = Vec::new();
        let mut positives = Vec::new();
        let mut undecided = 0usize;
        for c in cases {
            match c {
                Case::Pass(cert) => {
                    self.cases_run += 1;
                    self.cases_passed += 1;
                    if let Some(v) = cert {
                        if positives.len() < POSITIVE_SAMPLES {
                            positives.push(tag(v, "pass"));
                        }
                    }
                }
                Case::Fail(v) => {
                    self.cases_run += 1;
                    failures.push(tag(v, "fail"));
                }
                Case::Skip => self.skips += 1,
                Case::Undecided(v) => {
                    self.cases_run += 1;
                    undecided += 1;
                    failures.push(tag(v, "undecided"));
                }
            }
        }
        if undecided > 0 {
            self.note(format!("{undecided} cases undecided within the isomorphism-search cap"));
        }
        self.certificates.extend(failures);
        self.certificates.extend(positives);
        self
    }

    /// Fixes the status from the counts unless one was forced, then sorts
    /// and caps the certificates.
    pub fn finish(mut self, forced: Option<Status>) -> Self {
        let failures = self.cases_run - self.cases_passed;
        self.status = forced.unwrap_or(if failures > 0 {
            Status::Falsified
        } else if self.cases_run == 0 {
            Status::Skip
        } else {
            Status::Pass
        });
        // failures first, each group in canonical text order
        let mut keyed: Vec<(bool, String, Value)> = self
            .certificates
            .drain(..)
            .map(|v| (v["outcome"] == "pass", to_canonical_string(&v), v))
            .collect();
        keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let total = keyed.len();
        self.certificates = keyed.into_iter().take(MAX_CERTIFICATES).map(|(_, _, v)| v).collect();
        if total > MAX_CERTIFICATES {
            self.note(format!("certificates truncated to {MAX_CERTIFICATES} of {total}"));
        }
        self
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }

    pub fn to_json_string(&self) -> String {
        to_canonical_string(&self.to_value())
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn summary(&self) -> String {
        format!(
            "{} on {}: {} ({}/{} cases passed, {} skipped)",
            self.theorem_id, self.algebra, self.status, self.cases_passed, self.cases_run, self.skips
        )
    }
}

fn tag(mut v: Value, outcome: &str) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("outcome".into(), Value::String(outcome.into()));
        v
    } else {
        serde_json::json!({ "outcome": outcome, "data": v })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn budget_parses_and_prints() {
        let b: Budget = "cases=7, dim=2,window=4".parse().unwrap();
        assert_eq!(b, Budget { cases: 7, dim: 2, window: 4 });
        assert_eq!(b.to_string().parse::<Budget>().unwrap(), b);
        assert_eq!("".parse::<Budget>().unwrap(), Budget::default());
        assert!("cases=x".parse::<Budget>().is_err());
        assert!("depth=3".parse::<Budget>().is_err());
        assert!("dim=0".parse::<Budget>().is_err());
    }

    #[test]
    fn status_follows_counts() {
        let mut r = Report::new("t", "a", Budget::default(), 1);
        r.absorb([Case::Pass(None), Case::Skip]);
        assert_eq!(r.clone().finish(None).status, Status::Pass);
        r.absorb([Case::Fail(json!({"x": 1}))]);
        let r = r.finish(None);
        assert_eq!(r.status, Status::Falsified);
        assert_eq!((r.cases_run, r.cases_passed, r.skips), (2, 1, 1));
        assert_eq!(r.certificates[0]["outcome"], "fail");
    }

    #[test]
    fn certificates_sorted_and_capped() {
        let mut r = Report::new("t", "a", Budget::default(), 1);
        r.absorb((0..40).rev().map(|i| Case::Fail(json!({ "i": i }))));
        let r = r.finish(None);
        assert_eq!(r.certificates.len(), MAX_CERTIFICATES);
        assert_eq!(r.certificates[0]["i"], 0);
        assert!(r.notes.iter().any(|n| n.contains("truncated")));
    }

    #[test]
    fn empty_report_is_skip() {
        let r = Report::new("t", "a", Budget::default(), 1).finish(None);
        assert_eq!(r.status, Status::Skip);
    }
}
