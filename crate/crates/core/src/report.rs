//! Machine-readable outcomes of property checks.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkipReason {
    Truncation,
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped { reason: SkipReason },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub verdict: Verdict,
    /// Number of elementary comparisons made.
    pub checks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl PropertyReport {
    pub fn pass(suite: &str, checks: usize) -> Self {
        PropertyReport {
            suite: suite.into(),
            seed: None,
            verdict: Verdict::Pass,
            checks,
            witness: None,
            notes: vec![],
        }
    }

    pub fn fail(suite: &str, checks: usize, witness: Value) -> Self {
        PropertyReport {
            suite: suite.into(),
            seed: None,
            verdict: Verdict::Fail,
            checks,
            witness: Some(witness),
            notes: vec![],
        }
    }

    pub fn skipped(suite: &str, reason: SkipReason, note: impl Into<String>) -> Self {
        PropertyReport {
            suite: suite.into(),
            seed: None,
            verdict: Verdict::Skipped { reason },
            checks: 0,
            witness: None,
            notes: vec![note.into()],
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    /// Combines sub-reports: fails if any fails, skipped if all are skipped.
    pub fn combine(suite: &str, parts: Vec<PropertyReport>) -> PropertyReport {
        let checks = parts.iter().map(|r| r.checks).sum();
        if let Some(f) = parts.iter().find(|r| r.failed()) {
            let mut out =
                PropertyReport::fail(suite, checks, f.witness.clone().unwrap_or(Value::Null));
            out.notes.push(format!("failing part: {}", f.suite));
            return out;
        }
        if !parts.is_empty()
            && parts
                .iter()
                .all(|r| matches!(r.verdict, Verdict::Skipped { .. }))
        {
            let mut out = parts[0].clone();
            out.suite = suite.into();
            return out;
        }
        PropertyReport::pass(suite, checks)
    }
}
