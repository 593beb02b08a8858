//! Named pass/fail verdicts carried by certificates and validators.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Checklist(pub Vec<Check>);

impl Checklist {
    pub fn new() -> Self {
        Checklist(Vec::new())
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// Records `lhs == rhs` with both values in the detail.
    pub fn check_eq<T: PartialEq + std::fmt::Debug>(
        &mut self,
        name: impl Into<String>,
        lhs: T,
        rhs: T,
    ) {
        let passed = lhs == rhs;
        self.push(name, passed, format!("{lhs:?} = {rhs:?}"));
    }

    pub fn extend(&mut self, prefix: &str, other: &Checklist) {
        for c in &other.0 {
            self.0.push(Check {
                name: format!("{prefix}{}", c.name),
                passed: c.passed,
                detail: c.detail.clone(),
            });
        }
    }

    pub fn all_passed(&self) -> bool {
        self.0.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.0.iter().filter(|c| !c.passed).collect()
    }
}
