//! Content-addressed on-disk cache of Hom tables.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::homcalc::HomTable;

/// Bumped whenever a convention affecting table contents changes.
pub const CACHE_VERSION: u32 = 1;

pub const CACHE_DIR_ENV: &str = "CHAINFACT_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct CacheKey {
    chain: Vec<u32>,
    offset: i64,
    margin: i64,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    version: u32,
    key: CacheKey,
    /// sha256 of the serialized table.
    digest: String,
    table: HomTable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    /// Present but unreadable, stale or tampered with.
    Invalid,
}

#[derive(Debug)]
pub struct Cache {
    dir: PathBuf,
    writer: Mutex<()>,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into(), writer: Mutex::new(()) }
    }

    /// `$CHAINFACT_CACHE_DIR`, else `$XDG_CACHE_HOME/chainfact`, else
    /// `~/.cache/chainfact`, else a directory under the system temp dir.
    pub fn from_env() -> Self {
        if let Some(d) = std::env::var_os(CACHE_DIR_ENV) {
            return Cache::new(d);
        }
        if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
            return Cache::new(PathBuf::from(d).join("chainfact"));
        }
        if let Some(h) = std::env::var_os("HOME") {
            return Cache::new(PathBuf::from(h).join(".cache").join("chainfact"));
        }
        Cache::new(std::env::temp_dir().join("chainfact-cache"))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, chain: &[u32], offset: i64, margin: i64) -> PathBuf {
        let key = CacheKey { chain: chain.to_vec(), offset, margin };
        let text = format!("homtable/v{CACHE_VERSION}/{}", serde_json::to_string(&key).unwrap());
        self.dir.join(format!("{}.json", hex::encode(Sha256::digest(text.as_bytes()))))
    }

    pub fn get(&self, chain: &[u32], offset: i64, margin: i64) -> (Lookup, Option<HomTable>) {
        let path = self.path_for(chain, offset, margin);
        let Ok(text) = fs::read_to_string(&path) else {
            return (Lookup::Miss, None);
        };
        let Ok(entry) = serde_json::from_str::<CacheEntry>(&text) else {
            return (Lookup::Invalid, None);
        };
        let key = CacheKey { chain: chain.to_vec(), offset, margin };
        if entry.version != CACHE_VERSION || entry.key != key || entry.table.chain != chain {
            return (Lookup::Invalid, None);
        }
        if digest(&entry.table) != entry.digest {
            return (Lookup::Invalid, None);
        }
        (Lookup::Hit, Some(entry.table))
    }

    pub fn put(&self, offset: i64, margin: i64, table: &HomTable) -> Result<()> {
        let _guard = self.writer.lock().unwrap();
        fs::create_dir_all(&self.dir)?;
        let key = CacheKey { chain: table.chain.clone(), offset, margin };
        let entry = CacheEntry { version: CACHE_VERSION, key, digest: digest(table), table: table.clone() };
        let path = self.path_for(&table.chain, offset, margin);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string(&entry)?)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}

fn digest(table: &HomTable) -> String {
    let text = serde_json::to_string(table).expect("table serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}
