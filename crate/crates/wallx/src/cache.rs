//! Content-addressed store of report documents.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::Value;
use sha2::{Digest, Sha256};

/// Bumped whenever report contents may change.
pub const ARTIFACT_VERSION: &str = concat!("wallx-", env!("CARGO_PKG_VERSION"), "-r1");

pub struct Cache {
    dir: PathBuf,
}

pub enum Lookup {
    Hit(Vec<u8>),
    Miss,
    Corrupt(String),
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `$WALLX_CACHE`, else `.wallx-cache/`.
    pub fn from_env() -> Self {
        Cache::new(std::env::var_os("WALLX_CACHE").map(PathBuf::from).unwrap_or_else(|| ".wallx-cache".into()))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(command: &str, params: &Value) -> String {
        Self::key_versioned(command, params, ARTIFACT_VERSION)
    }

    pub fn key_versioned(command: &str, params: &Value, version: &str) -> String {
        let mut h = Sha256::new();
        h.update(version.as_bytes());
        h.update([0]);
        h.update(command.as_bytes());
        h.update([0]);
        h.update(params.to_string().as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", key))
    }

    pub fn get(&self, key: &str) -> Lookup {
        match fs::read(self.path(key)) {
            Ok(bytes) => match serde_json::from_slice::<Value>(&bytes) {
                Ok(Value::Object(_)) => Lookup::Hit(bytes),
                _ => Lookup::Corrupt(format!("cache entry {} is not a report", key)),
            },
            Err(e) if e.kind() == io::ErrorKind::NotFound => Lookup::Miss,
            Err(e) => Lookup::Corrupt(e.to_string()),
        }
    }

    pub fn put(&self, key: &str, bytes: &[u8]) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{}.tmp", key));
        fs::write(&tmp, bytes)?;
        fs::rename(tmp, self.path(key))
    }
}
