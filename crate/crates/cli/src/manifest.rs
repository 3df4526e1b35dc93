//! Run manifests: what was run, with which seed, and a digest of the output.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::canonical;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub seed: u64,
    /// seconds since the Unix epoch
    pub timestamp: u64,
    pub versions: BTreeMap<String, String>,
    /// sha256 of the exact bytes written to stdout
    pub result_digest: String,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Value, seed: u64, output: &str) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let versions = BTreeMap::from([
            ("lattice-lab".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("census-algorithm".to_string(), lattice_lab::perm::census::version_hash()),
        ]);
        RunManifest {
            command: command.into(),
            parameters,
            seed,
            timestamp,
            versions,
            result_digest: canonical::digest(output),
        }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, canonical::to_string(self) + "\n")
    }
}
