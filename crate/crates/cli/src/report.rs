use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    PreconditionError,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::PreconditionError => 2,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::PreconditionError => "precondition-error",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            field: None,
            verdict: Verdict::Pass,
            note: None,
            error: None,
            checks: Vec::new(),
            details: BTreeMap::new(),
            timings_ms: None,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, holds: bool, witness: Option<String>) {
        self.checks.push(Check {
            name: name.into(),
            verdict: if holds { Verdict::Pass } else { Verdict::Fail },
            witness: if holds { None } else { witness },
        });
    }

    pub fn detail(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.to_string(), value.into());
    }

    pub fn fail_with(&mut self, error: impl Into<String>) {
        self.error = Some(error.into());
    }

    /// Sets the overall verdict from the error and the checks.
    pub fn finish(&mut self) -> Verdict {
        self.verdict = if self.error.is_some() {
            Verdict::PreconditionError
        } else if self.checks.iter().any(|c| c.verdict == Verdict::Fail) {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
        self.verdict
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        if let Some(f) = &self.field {
            let _ = writeln!(s, "field: {f}");
        }
        if let Some(n) = &self.note {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(s, "verdict: {}", self.verdict.as_str());
        if let Some(e) = &self.error {
            let _ = writeln!(s, "error: {e}");
        }
        for c in &self.checks {
            let _ = write!(s, "  [{}] {}", c.verdict.as_str(), c.name);
            if let Some(w) = &c.witness {
                let _ = write!(s, ": {w}");
            }
            s.push('\n');
        }
        for (k, v) in &self.details {
            match v {
                Value::String(t) => {
                    let _ = writeln!(s, "{k}: {t}");
                }
                Value::Number(_) | Value::Bool(_) => {
                    let _ = writeln!(s, "{k}: {v}");
                }
                _ => {
                    let _ = writeln!(s, "{k}: {}", serde_json::to_string(v).expect("values serialize"));
                }
            }
        }
        if let Some(t) = &self.timings_ms {
            for (k, v) in t {
                let _ = writeln!(s, "time {k}: {v:.3} ms");
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_checks_and_errors() {
        let mut r = Report::new("x");
        r.check("a", true, Some("ignored".into()));
        assert_eq!(r.finish(), Verdict::Pass);
        assert!(r.checks[0].witness.is_none());
        r.check("b", false, Some("w".into()));
        assert_eq!(r.finish(), Verdict::Fail);
        r.fail_with("bad");
        assert_eq!(r.finish().exit_code(), 2);
    }
}
