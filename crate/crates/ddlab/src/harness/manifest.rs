//! Run manifests: enough metadata to re-run any simulation exactly.

use sha2::{Digest, Sha256};
use std::time::{SystemTime, UNIX_EPOCH};

/// Provenance record emitted next to every CSV.
///
/// The digest is the SHA-256 of the canonical configuration text, so
/// semantically identical configurations digest identically. The timestamp
/// is informational only and is the one field that varies between
/// otherwise-identical runs; CSV output never includes it.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub tool_version: String,
    pub master_seed: u64,
    pub canonical_config: String,
    pub config_digest: String,
    pub timestamp_unix: u64,
}

impl RunManifest {
    pub fn new(master_seed: u64, canonical_config: String) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(canonical_config.as_bytes());
        let config_digest = format!("{:x}", hasher.finalize());
        let timestamp_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            master_seed,
            canonical_config,
            config_digest,
            timestamp_unix,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("ddlab run manifest\n");
        out.push_str(&format!("tool_version={}\n", self.tool_version));
        out.push_str(&format!("master_seed={}\n", self.master_seed));
        out.push_str(&format!("config_digest=sha256:{}\n", self.config_digest));
        out.push_str(&format!("timestamp_unix={}\n", self.timestamp_unix));
        out.push_str("config:\n");
        for line in self.canonical_config.lines() {
            out.push_str("  ");
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}
