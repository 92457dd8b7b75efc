use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::arith::{integer_to_json, Integer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inapplicable,
}

impl Verdict {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Holds => 0,
            Verdict::Fails => 1,
            Verdict::Inapplicable => 2,
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

/// A machine-checkable verdict carrying every intermediate quantity needed to
/// re-check it by hand.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub claim: String,
    pub inputs: Value,
    pub witness_volumes: Map<String, Value>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Certificate {
    pub fn new(claim: impl Into<String>, inputs: Value) -> Self {
        Self {
            claim: claim.into(),
            inputs,
            witness_volumes: Map::new(),
            verdict: Verdict::Inapplicable,
            note: None,
            witness: None,
        }
    }

    pub fn volume(mut self, name: impl Into<String>, value: &Integer) -> Self {
        self.witness_volumes.insert(name.into(), integer_to_json(value));
        self
    }

    pub fn value(mut self, name: impl Into<String>, value: Value) -> Self {
        self.witness_volumes.insert(name.into(), value);
        self
    }

    pub fn with_verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("certificate JSON")
    }
}
