use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Machine-readable record of one CLI invocation.
///
/// Rationals inside `result` are strings (`"3"`, `"-1/2"`); polynomial
/// indices are 0-based positions in `inputs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<String>,
    pub result: Value,
    #[serde(default)]
    pub seed: Option<u64>,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
