use serde::Serialize;
use sha2::{Digest, Sha256};

/// Identifies the inputs an output file was produced from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
    pub version: String,
}

impl Provenance {
    /// Hashes the canonical JSON form of the effective configuration (after overrides).
    pub fn new<C: Serialize>(command: &str, config: &C, seed: u64) -> Self {
        let json = serde_json::to_string(config).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        Provenance {
            command: command.to_string(),
            config_sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// `key=value` pairs for the `#` header block of CSV outputs.
    pub fn header(&self) -> Vec<(String, String)> {
        vec![
            ("command".into(), self.command.clone()),
            ("config_sha256".into(), self.config_sha256.clone()),
            ("seed".into(), self.seed.to_string()),
            ("version".into(), self.version.clone()),
        ]
    }
}
