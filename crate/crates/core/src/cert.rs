//! Pass/fail reports with witnesses and counterexamples.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// The violated clause and the tuple of cell names it was violated at.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counterexample {
    pub clause: String,
    pub cells: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub check: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl Certificate {
    pub fn pass(check: &str) -> Self {
        Certificate { check: check.into(), status: Status::Pass, witness: None, counterexample: None }
    }

    pub fn pass_with(check: &str, witness: Value) -> Self {
        Certificate { witness: Some(witness), ..Self::pass(check) }
    }

    pub fn fail(check: &str, clause: &str, cells: Vec<String>) -> Self {
        Certificate {
            check: check.into(),
            status: Status::Fail,
            witness: None,
            counterexample: Some(Counterexample { clause: clause.into(), cells }),
        }
    }

    pub fn inconclusive(check: &str, reason: &str) -> Self {
        Certificate {
            check: check.into(),
            status: Status::Inconclusive,
            witness: Some(Value::String(reason.into())),
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn clause(&self) -> Option<&str> {
        self.counterexample.as_ref().map(|c| c.clause.as_str())
    }

    /// Turns a search result into a certificate, mapping an exhausted cap
    /// to an inconclusive verdict and passing every other error through.
    pub fn from_result(check: &str, r: Result<Certificate>) -> Result<Certificate> {
        match r {
            Err(Error::CapExceeded(why)) => Ok(Self::inconclusive(check, &why)),
            other => other,
        }
    }

    /// Prefixes the clause tag, used when a composite check forwards a
    /// sub-certificate's counterexample.
    pub fn nested(mut self, check: &str) -> Self {
        if let Some(c) = self.counterexample.as_mut() {
            c.clause = format!("{}/{}", self.check, c.clause);
        }
        self.check = check.into();
        self
    }
}

/// Search budgets. Exceeding one yields an inconclusive verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub candidates: usize,
    pub instances: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { candidates: 200_000, instances: 2_000_000 }
    }
}

impl Caps {
    pub fn check_instances(&self, what: &str, n: usize) -> Result<()> {
        if n > self.instances {
            return Err(Error::CapExceeded(format!("{what}: {n} instances > {}", self.instances)));
        }
        Ok(())
    }

    pub fn check_candidates(&self, what: &str, n: usize) -> Result<()> {
        if n > self.candidates {
            return Err(Error::CapExceeded(format!("{what}: {n} candidates > {}", self.candidates)));
        }
        Ok(())
    }
}
