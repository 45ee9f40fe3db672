use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        }
    }
}

/// One named check with its exact witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub witness: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool, witness: Value) -> Self {
        Check { name: name.into(), verdict: Verdict::from_bool(ok), witness }
    }

    pub fn skipped(name: impl Into<String>, reason: &str) -> Self {
        Check { name: name.into(), verdict: Verdict::Skipped, witness: json!({ "reason": reason }) }
    }

    pub fn failed(name: impl Into<String>, error: impl ToString) -> Self {
        Check { name: name.into(), verdict: Verdict::Fail, witness: json!({ "error": error.to_string() }) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub setting: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(setting: impl Into<String>) -> Self {
        Report { setting: setting.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    /// No check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.checks.iter().filter(|c| c.verdict == v).count()
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail).collect()
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "setting": self.setting,
            "passed": self.passed(),
            "counts": {
                "pass": self.count(Verdict::Pass),
                "fail": self.count(Verdict::Fail),
                "skipped": self.count(Verdict::Skipped),
            },
            "checks": self.checks,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {} pass, {} fail, {} skipped\n",
            self.setting,
            self.count(Verdict::Pass),
            self.count(Verdict::Fail),
            self.count(Verdict::Skipped)
        );
        for c in &self.checks {
            out.push_str(&format!("  [{}] {}\n", c.verdict.as_str(), c.name));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_passes() {
        let r = Report::new("empty");
        assert!(r.passed());
        assert_eq!(r.to_json()["counts"]["pass"], 0);
    }

    #[test]
    fn skipped_does_not_fail() {
        let mut r = Report::new("s");
        r.push(Check::skipped("a", "n/a"));
        r.push(Check::new("b", true, Value::Null));
        assert!(r.passed());
        r.push(Check::failed("c", "boom"));
        assert!(!r.passed());
        assert_eq!(r.failures()[0].name, "c");
        assert!(r.to_text().contains("[fail] c"));
    }
}
