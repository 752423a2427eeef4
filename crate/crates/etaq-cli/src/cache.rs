//! On-disk cache of expanded series, keyed by a canonical text encoding of
//! (constructor, params, order). Entries are the serialized series documents,
//! so cached and fresh runs emit identical bytes.

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use etaq::series::SeriesJson;
use etaq::UniSeries;
use serde::{Deserialize, Serialize};

pub const CACHE_DIR_ENV: &str = "ETAQ_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    series: SeriesJson,
}

pub struct SeriesCache {
    dir: PathBuf,
    enabled: bool,
}

fn fnv64(s: &str) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

impl SeriesCache {
    pub fn resolve_dir() -> PathBuf {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) => PathBuf::from(dir),
            None => PathBuf::from(".etaq-cache"),
        }
    }

    pub fn new(enabled: bool) -> Self {
        SeriesCache {
            dir: Self::resolve_dir(),
            enabled,
        }
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{:016x}.json", fnv64(key)))
    }

    pub fn get(&self, key: &str) -> Option<UniSeries> {
        if !self.enabled {
            return None;
        }
        let text = fs::read_to_string(self.path_for(key)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if entry.key != key {
            return None;
        }
        UniSeries::from_json(&entry.series).ok()
    }

    pub fn put(&self, key: &str, series: &UniSeries) -> Result<()> {
        if !self.enabled {
            return Ok(());
        }
        fs::create_dir_all(&self.dir)
            .with_context(|| format!("creating cache dir {}", self.dir.display()))?;
        let entry = Entry {
            key: key.to_string(),
            series: series.to_json(),
        };
        let text = serde_json::to_string(&entry)?;
        fs::write(self.path_for(key), text)
            .with_context(|| format!("writing cache entry for {key:?}"))?;
        Ok(())
    }

    /// Fetch-or-compute wrapper.
    pub fn series(&self, key: &str, compute: impl FnOnce() -> UniSeries) -> Result<UniSeries> {
        if let Some(hit) = self.get(key) {
            return Ok(hit);
        }
        let s = compute();
        self.put(key, &s)?;
        Ok(s)
    }

    pub fn stats(&self) -> Result<(usize, u64, Vec<String>)> {
        let mut count = 0usize;
        let mut bytes = 0u64;
        let mut keys = Vec::new();
        if self.dir.is_dir() {
            for entry in fs::read_dir(&self.dir)? {
                let entry = entry?;
                if entry.path().extension().is_some_and(|e| e == "json") {
                    count += 1;
                    bytes += entry.metadata()?.len();
                    if let Ok(text) = fs::read_to_string(entry.path()) {
                        if let Ok(parsed) = serde_json::from_str::<Entry>(&text) {
                            keys.push(parsed.key);
                        }
                    }
                }
            }
        }
        keys.sort();
        Ok((count, bytes, keys))
    }

    pub fn clear(&self) -> Result<usize> {
        let mut removed = 0usize;
        if self.dir.is_dir() {
            for entry in fs::read_dir(&self.dir)? {
                let entry = entry?;
                if entry.path().extension().is_some_and(|e| e == "json") {
                    fs::remove_file(entry.path())?;
                    removed += 1;
                }
            }
        }
        Ok(removed)
    }

    pub fn dir(&self) -> &PathBuf {
        &self.dir
    }
}
