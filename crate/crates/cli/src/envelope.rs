use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "spectral-gamma";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Every JSON document the tool writes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub parameters: Value,
    pub input_checksum: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
}

impl Envelope {
    pub fn new(command: &str, seed: u64, parameters: Value, input_checksum: String, result: Option<Value>) -> Self {
        Envelope {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            seed,
            parameters,
            input_checksum,
            result,
        }
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render(&self) -> String {
        let value = serde_json::to_value(self).expect("envelope serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Digest over the digests of the inputs, in order.
pub fn combined_checksum(parts: &[Vec<u8>]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(Sha256::digest(p));
    }
    format!("{:x}", h.finalize())
}

/// A computed number with the interval certified to contain the true value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    /// Widened by `terms` ulps of relative rounding, for floating sums.
    pub fn rounded(value: f64, terms: usize) -> Self {
        let slack = value.abs() * f64::EPSILON * (terms.max(1) as f64);
        Interval { value, lower: value - slack, upper: value + slack }
    }
}
