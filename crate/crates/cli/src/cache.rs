//! Content-addressed on-disk cache for expensive series computations.
//!
//! Entries are keyed by (producer id, parameter string, precision); the
//! payload is stored as canonical JSON together with its SHA-256 checksum.
//! A mismatching checksum triggers recomputation with a warning. Writes go
//! through a temp file and rename, so concurrent runs see either the old or
//! the new entry, never a torn one.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Serialize, Deserialize)]
struct Entry {
    checksum: String,
    payload: serde_json::Value,
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// `dir = None` disables caching (everything recomputes).
    pub fn new(dir: Option<PathBuf>) -> Self {
        if let Some(d) = &dir {
            let _ = fs::create_dir_all(d);
        }
        Cache { dir }
    }

    pub fn from_env() -> Self {
        Self::new(std::env::var_os("PET1_CACHE").map(PathBuf::from))
    }

    fn path(&self, producer: &str, params: &str, prec: i64) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        let sanitized: String = params
            .chars()
            .map(|c| if c.is_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
            .collect();
        Some(dir.join(format!("{producer}-{sanitized}-{prec}.json")))
    }

    pub fn get_or_compute<T, F>(&self, producer: &str, params: &str, prec: i64, compute: F) -> T
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> T,
    {
        let Some(path) = self.path(producer, params, prec) else {
            return compute();
        };
        if let Some(v) = read_entry(&path) {
            return v;
        }
        let value = compute();
        write_entry(&path, &value);
        value
    }
}

fn digest(payload: &serde_json::Value) -> String {
    let bytes = serde_json::to_vec(payload).expect("serialize payload");
    let mut h = Sha256::new();
    h.update(&bytes);
    format!("{:x}", h.finalize())
}

fn read_entry<T: DeserializeOwned>(path: &Path) -> Option<T> {
    let raw = fs::read(path).ok()?;
    let entry: Entry = match serde_json::from_slice(&raw) {
        Ok(e) => e,
        Err(_) => {
            eprintln!("warning: unreadable cache entry {}; recomputing", path.display());
            return None;
        }
    };
    if digest(&entry.payload) != entry.checksum {
        eprintln!("warning: checksum mismatch in {}; recomputing", path.display());
        return None;
    }
    match serde_json::from_value(entry.payload) {
        Ok(v) => Some(v),
        Err(_) => {
            eprintln!("warning: stale cache schema in {}; recomputing", path.display());
            None
        }
    }
}

fn write_entry<T: Serialize>(path: &Path, value: &T) {
    let payload = match serde_json::to_value(value) {
        Ok(p) => p,
        Err(_) => return,
    };
    let entry = Entry { checksum: digest(&payload), payload };
    let tmp = path.with_extension("tmp");
    if fs::write(&tmp, serde_json::to_vec(&entry).expect("entry json")).is_ok() {
        let _ = fs::rename(&tmp, path);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_hit() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        let mut calls = 0;
        let v: Vec<i64> = cache.get_or_compute("test", "a=1", 50, || {
            calls += 1;
            vec![1, 2, 3]
        });
        assert_eq!(v, vec![1, 2, 3]);
        let v2: Vec<i64> = cache.get_or_compute("test", "a=1", 50, || {
            calls += 1;
            vec![9, 9, 9]
        });
        assert_eq!(v2, vec![1, 2, 3], "second call must hit the cache");
        assert_eq!(calls, 1);
        // different precision is a different entry
        let v3: Vec<i64> = cache.get_or_compute("test", "a=1", 60, || vec![4]);
        assert_eq!(v3, vec![4]);
    }

    #[test]
    fn corruption_recovers() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        let _: Vec<i64> = cache.get_or_compute("test", "x", 1, || vec![7]);
        // corrupt the file
        let path = dir.path().join("test-x-1.json");
        std::fs::write(&path, b"{\"checksum\":\"00\",\"payload\":[7]}").unwrap();
        let v: Vec<i64> = cache.get_or_compute("test", "x", 1, || vec![8]);
        assert_eq!(v, vec![8]);
    }

    #[test]
    fn disabled_cache_always_computes() {
        let cache = Cache::new(None);
        let mut calls = 0;
        for _ in 0..2 {
            let _: i64 = cache.get_or_compute("t", "p", 1, || {
                calls += 1;
                42
            });
        }
        assert_eq!(calls, 2);
    }
}
