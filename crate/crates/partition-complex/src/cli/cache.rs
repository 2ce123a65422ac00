//! On-disk cache of computed Betti tables.
//!
//! Each entry is one JSON file named after a key that hashes the code
//! version together with the request. The entry repeats the version and key
//! and carries a digest of its payload; an entry that fails any of these
//! checks, or does not parse, is ignored and overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::report::code_version;
use crate::error::Result;
use crate::homology::BettiTable;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "PARTCX_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    version: String,
    key: String,
    digest: String,
    payload: String,
}

fn sha256_hex(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0]);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: Some(dir.into()) }
    }

    /// The directory from the flag if given, else from the environment.
    pub fn configured(flag: Option<&Path>, disabled: bool) -> Self {
        if disabled {
            return Self::disabled();
        }
        match flag {
            Some(d) => Self::at(d),
            None => std::env::var_os(CACHE_ENV).map_or_else(Self::disabled, Self::at),
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    pub fn key(request: &str) -> String {
        sha256_hex(&[&code_version(), request])
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    /// The cached tables for `request`, if a valid entry exists.
    pub fn load(&self, request: &str) -> Option<Vec<BettiTable>> {
        let key = Self::key(request);
        let text = fs::read_to_string(self.path(&key)?).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if entry.version != code_version() || entry.key != key || entry.digest != sha256_hex(&[&entry.payload]) {
            return None;
        }
        serde_json::from_str(&entry.payload).ok()
    }

    /// Writes an entry; failures to write leave the cache unchanged and are
    /// not errors.
    pub fn store(&self, request: &str, tables: &[BettiTable]) {
        let key = Self::key(request);
        let Some(path) = self.path(&key) else { return };
        let Ok(payload) = serde_json::to_string(tables) else {
            return;
        };
        let entry = Entry {
            version: code_version(),
            digest: sha256_hex(&[&payload]),
            key,
            payload,
        };
        let Ok(text) = serde_json::to_string(&entry) else {
            return;
        };
        if fs::create_dir_all(path.parent().expect("entry has a directory")).is_err() {
            return;
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        if fs::write(&tmp, text).is_ok() && fs::rename(&tmp, &path).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }

    /// Cached tables for `request`, or the result of `compute`, which is
    /// then stored. The flag tells whether the cache served the request.
    pub fn get_or_compute<F>(&self, request: &str, compute: F) -> Result<(Vec<BettiTable>, bool)>
    where
        F: FnOnce() -> Result<Vec<BettiTable>>,
    {
        if let Some(t) = self.load(request) {
            return Ok((t, true));
        }
        let t = compute()?;
        self.store(request, &t);
        Ok((t, false))
    }
}
