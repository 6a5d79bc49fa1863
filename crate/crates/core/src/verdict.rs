use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Three-valued finite-horizon answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

/// The result of one analyzer run.
///
/// `params` echoes the inputs (horizon, depth, radii). `certificate` holds
/// the replayable evidence; its keys are fixed per analyzer and documented
/// in the README. An `Inconclusive` verdict records the exhausted resource
/// under the key `exhausted`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub analyzer: String,
    pub status: Status,
    pub params: BTreeMap<String, Value>,
    pub certificate: BTreeMap<String, Value>,
}

impl Verdict {
    pub fn new(analyzer: &str, status: Status) -> Self {
        Verdict {
            analyzer: analyzer.to_string(),
            status,
            params: BTreeMap::new(),
            certificate: BTreeMap::new(),
        }
    }

    pub fn holds(analyzer: &str) -> Self {
        Self::new(analyzer, Status::Holds)
    }

    pub fn fails(analyzer: &str) -> Self {
        Self::new(analyzer, Status::Fails)
    }

    pub fn inconclusive(analyzer: &str, exhausted: &str) -> Self {
        Self::new(analyzer, Status::Inconclusive).cert("exhausted", exhausted)
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.to_string(), to_value(value));
        self
    }

    pub fn cert(mut self, key: &str, value: impl Serialize) -> Self {
        self.certificate.insert(key.to_string(), to_value(value));
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }

    pub fn is_inconclusive(&self) -> bool {
        self.status == Status::Inconclusive
    }

    pub fn cert_u64(&self, key: &str) -> Option<u64> {
        self.certificate.get(key).and_then(Value::as_u64)
    }

    pub fn cert_i64(&self, key: &str) -> Option<i64> {
        self.certificate.get(key).and_then(Value::as_i64)
    }

    pub fn cert_str(&self, key: &str) -> Option<&str> {
        self.certificate.get(key).and_then(Value::as_str)
    }
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("certificate values serialize")
}
