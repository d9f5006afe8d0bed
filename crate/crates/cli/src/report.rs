use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// Machine-readable record of one invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub subcommand: String,
    pub parameters: Value,
    pub verdicts: Value,
    pub timing: Timing,
    pub artifact_version: String,
    pub input_digests: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

impl RunReport {
    pub fn new(subcommand: &str, parameters: Value) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            subcommand: subcommand.to_string(),
            parameters,
            verdicts: Value::Null,
            timing: Timing { elapsed_ms: 0.0 },
            artifact_version: format!("lee-embed {}", env!("CARGO_PKG_VERSION")),
            input_digests: BTreeMap::new(),
        }
    }

    pub fn add_digest(&mut self, name: impl Into<String>, bytes: &[u8]) {
        self.input_digests.insert(name.into(), sha256_hex(bytes));
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
