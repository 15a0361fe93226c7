//! Content-addressed on-disk cache of weight tables.
//!
//! An entry lives at `<dir>/<key>.json` where `key` is the SHA-256 of the
//! canonical JSON of (tool version, Cartan matrix, label offset, truncation,
//! task). The file stores the payload as a string next to its own SHA-256,
//! so a flipped byte anywhere in the payload is detected before parsing.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use tilting_core::{CoxeterSystem, WeightMatrix};

use crate::CliError;

/// Bumped whenever the payload format or any computation changes.
pub const CACHE_VERSION: &str = concat!("tiltweights-", env!("CARGO_PKG_VERSION"), "/1");

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Identity of a cached table. The type label is deliberately absent so
/// that equivalent descriptors share entries.
#[derive(Debug, Clone)]
pub struct CacheKey {
    material: Value,
    digest: String,
}

impl CacheKey {
    pub fn new(sys: &CoxeterSystem, truncation: Value, task: &str) -> Self {
        let material = json!({
            "version": CACHE_VERSION,
            "cartan": sys.cartan(),
            "first_generator": sys.first_generator(),
            "truncation": truncation,
            "task": task,
        });
        let digest = sha256_hex(material.to_string().as_bytes());
        CacheKey { material, digest }
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }
}

pub struct TableCache {
    dir: PathBuf,
}

/// Result of a lookup.
pub enum Lookup {
    Hit(WeightMatrix),
    Miss,
    /// The entry exists but failed validation; the reason is attached.
    Corrupt(String),
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        TableCache { dir: dir.into() }
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest))
    }

    pub fn load(&self, sys: &CoxeterSystem, key: &CacheKey) -> Lookup {
        let path = self.path(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Lookup::Miss,
            Err(e) => return Lookup::Corrupt(e.to_string()),
        };
        match decode(sys, key, &text) {
            Ok(m) => Lookup::Hit(m),
            Err(reason) => Lookup::Corrupt(reason),
        }
    }

    /// Writes to a temporary file in the cache directory and renames it into
    /// place, so readers never observe a partial entry.
    pub fn store(&self, sys: &CoxeterSystem, key: &CacheKey, table: &WeightMatrix) -> Result<(), CliError> {
        fs::create_dir_all(&self.dir).map_err(|e| io_error(&self.dir, e))?;
        let payload = table.to_json(sys).to_string();
        let entry = json!({
            "version": CACHE_VERSION,
            "key": key.material,
            "digest": sha256_hex(payload.as_bytes()),
            "payload": payload,
        });
        let target = self.path(key);
        let tmp = self.dir.join(format!(".{}.{}.tmp", key.digest, std::process::id()));
        let mut file = fs::File::create(&tmp).map_err(|e| io_error(&tmp, e))?;
        file.write_all(entry.to_string().as_bytes()).map_err(|e| io_error(&tmp, e))?;
        file.sync_all().map_err(|e| io_error(&tmp, e))?;
        fs::rename(&tmp, &target).map_err(|e| io_error(&target, e))
    }
}

fn decode(sys: &CoxeterSystem, key: &CacheKey, text: &str) -> Result<WeightMatrix, String> {
    let entry: Value = serde_json::from_str(text).map_err(|e| format!("unreadable entry: {e}"))?;
    if entry.get("version").and_then(Value::as_str) != Some(CACHE_VERSION) {
        return Err("version stamp mismatch".into());
    }
    if entry.get("key") != Some(&key.material) {
        return Err("key material mismatch".into());
    }
    let payload = entry.get("payload").and_then(Value::as_str).ok_or("missing payload")?;
    if entry.get("digest").and_then(Value::as_str) != Some(sha256_hex(payload.as_bytes()).as_str()) {
        return Err("payload digest mismatch".into());
    }
    let value: Value = serde_json::from_str(payload).map_err(|e| format!("unreadable payload: {e}"))?;
    WeightMatrix::from_json(sys, &value).map_err(|e| e.to_string())
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}
