use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;

/// A failed condition and the first witness found for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: String,
    pub witness: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {}", self.condition)?;
        if !self.witness.is_empty() {
            write!(f, ", witness ({})", self.witness.join(", "))?;
        }
        if let Some(detail) = &self.detail {
            write!(f, ": {detail}")?;
        }
        Ok(())
    }
}

/// Outcome of an exhaustive check. The verdict is `pass` exactly when no
/// violation was recorded.
///
/// Checkers record at most one violation per condition (the first one met in
/// their enumeration order) but always visit every condition, so a failing
/// report lists every condition that fails.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    violations: Vec<Violation>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn violation(&self, condition: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.condition == condition)
    }

    pub fn violates(&self, condition: &str) -> bool {
        self.violation(condition).is_some()
    }

    /// Records a violation unless `condition` already has one.
    pub fn fail(&mut self, condition: impl Into<String>, witness: Vec<String>) {
        self.fail_with(condition, witness, None::<String>);
    }

    pub fn fail_with(
        &mut self,
        condition: impl Into<String>,
        witness: Vec<String>,
        detail: Option<impl Into<String>>,
    ) {
        let condition = condition.into();
        if self.violates(&condition) {
            return;
        }
        self.violations.push(Violation {
            condition,
            witness,
            detail: detail.map(Into::into),
        });
    }

    /// Appends the violations of `other`, prefixing their condition names.
    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        for mut v in other.violations {
            v.condition = format!("{prefix}{}", v.condition);
            if !self.violates(&v.condition) {
                self.violations.push(v);
            }
        }
    }

    pub fn verdict(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }
}

impl Serialize for CheckReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CheckReport", 2)?;
        s.serialize_field("verdict", self.verdict())?;
        s.serialize_field("violations", &self.violations)?;
        s.end()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "pass");
        }
        write!(f, "fail")?;
        for v in &self.violations {
            write!(f, "\n  - {v}")?;
        }
        Ok(())
    }
}

/// Three-valued answer for questions that may run out of fuel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_first_witness_per_condition() {
        let mut r = CheckReport::new();
        assert!(r.passed());
        r.fail("5", vec!["0".into()]);
        r.fail("5", vec!["1".into()]);
        r.fail("2", vec![]);
        assert!(!r.passed());
        assert_eq!(r.violations().len(), 2);
        assert_eq!(r.violation("5").unwrap().witness, vec!["0".to_string()]);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["verdict"], "fail");
    }
}
