//! Pass/fail reports for identities checked on basis tuples.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{vector, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: String,
    /// Basis names (or other labels) of the offending tuple.
    pub witness: Vec<String>,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub violations: Vec<Violation>,
}

impl Certificate {
    pub fn ok() -> Self {
        Certificate::default()
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, identity: &str, witness: Vec<String>, lhs: &[FieldElement], rhs: &[FieldElement]) {
        self.violations.push(Violation {
            identity: identity.to_string(),
            witness,
            lhs: vector::to_strings(lhs),
            rhs: vector::to_strings(rhs),
        });
    }

    /// Records a violation when `lhs != rhs`.
    pub fn expect_eq(&mut self, identity: &str, witness: &[&str], lhs: &[FieldElement], rhs: &[FieldElement]) {
        if lhs != rhs {
            self.push(identity, witness.iter().map(|s| s.to_string()).collect(), lhs, rhs);
        }
    }

    pub fn merge(&mut self, other: Certificate) {
        self.violations.extend(other.violations);
    }

    pub fn has(&self, identity: &str) -> bool {
        self.violations.iter().any(|v| v.identity == identity)
    }

    /// Turns a failed certificate into an error naming the first violation.
    pub fn into_result(self, make: fn(String) -> Error) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(make(format!(
                "{} fails at ({}): {:?} != {:?}{}",
                v.identity,
                v.witness.join(", "),
                v.lhs,
                v.rhs,
                if self.violations.len() > 1 {
                    format!(" (and {} more)", self.violations.len() - 1)
                } else {
                    String::new()
                }
            ))),
        }
    }
}
