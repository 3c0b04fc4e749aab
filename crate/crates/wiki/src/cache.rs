//! Content-addressed response cache.
//!
//! Each entry is one JSON file at `<dir>/<h[0..2]>/<h>.json`, where `h` is
//! the SHA-256 of the canonical request string `endpoint?k1=v1&k2=v2` with
//! parameters sorted by key. Entries are written once and never replaced.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Result, WikiError};
use crate::transport::Request;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    /// Canonical request string.
    pub key: String,
    pub status: u16,
    pub fetched_at: String,
    pub body: String,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

fn cache_err(path: &Path, e: impl std::fmt::Display) -> WikiError {
    WikiError::Cache {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn digest(request: &Request) -> String {
        hex::encode(Sha256::digest(request.canonical().as_bytes()))
    }

    pub fn path_for(&self, request: &Request) -> PathBuf {
        let h = Self::digest(request);
        self.dir.join(&h[..2]).join(format!("{h}.json"))
    }

    pub fn get(&self, request: &Request) -> Result<Option<CacheEntry>> {
        let path = self.path_for(request);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(cache_err(&path, e)),
        };
        let entry: CacheEntry = serde_json::from_str(&text).map_err(|e| cache_err(&path, e))?;
        if entry.key != request.canonical() {
            return Err(cache_err(&path, "key does not match request"));
        }
        Ok(Some(entry))
    }

    /// Stores `entry` unless an entry for the same request already exists.
    pub fn put(&self, entry: &CacheEntry) -> Result<()> {
        let h = hex::encode(Sha256::digest(entry.key.as_bytes()));
        let sub = self.dir.join(&h[..2]);
        let path = sub.join(format!("{h}.json"));
        if path.exists() {
            return Ok(());
        }
        fs::create_dir_all(&sub).map_err(|e| cache_err(&sub, e))?;
        let mut text = serde_json::to_string_pretty(entry).map_err(|e| cache_err(&path, e))?;
        text.push('\n');
        let tmp = sub.join(format!(".{h}.{}.tmp", std::process::id()));
        let mut f = fs::File::create(&tmp).map_err(|e| cache_err(&tmp, e))?;
        f.write_all(text.as_bytes()).map_err(|e| cache_err(&tmp, e))?;
        drop(f);
        fs::rename(&tmp, &path).map_err(|e| cache_err(&path, e))
    }
}
