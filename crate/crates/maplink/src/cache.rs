//! On-disk cache of per-map linkage graphs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use maplink_core::{LinkageGraph, LinkageMethod};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::record::MapRecord;

/// Bump when the stored graph for the same inputs could change.
const CACHE_VERSION: &str = "maplink-graph-1";

#[derive(Debug, Clone)]
pub struct GraphCache {
    dir: PathBuf,
}

impl GraphCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Content address of a map's graph. The label content is hashed in so
    /// that an edited map never resolves to a stale entry.
    pub fn key(map: &MapRecord, method: LinkageMethod) -> String {
        let mut h = Sha256::new();
        for part in [CACHE_VERSION, &map.map_id, method.name(), &map.to_json()] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part.as_bytes());
        }
        hex::encode(h.finalize())
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// Unreadable or corrupt entries are treated as misses.
    pub fn get(&self, key: &str) -> Option<LinkageGraph> {
        let text = fs::read_to_string(self.path_for(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// Written to a temporary file in the cache directory and renamed into
    /// place, so readers never observe a partial entry.
    pub fn put(&self, key: &str, graph: &LinkageGraph) -> Result<()> {
        let json = serde_json::to_vec(graph).expect("graphs always serialize");
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        tmp.write_all(&json).map_err(|e| Error::io(tmp.path(), e))?;
        let target = self.path_for(key);
        tmp.persist(&target).map_err(|e| Error::io(&target, e.error))?;
        Ok(())
    }

    /// Only methods that need no learned parameters are cacheable.
    pub fn get_or_build(&self, map: &MapRecord, method: LinkageMethod) -> Result<LinkageGraph> {
        let key = Self::key(map, method);
        if let Some(g) = self.get(&key) {
            return Ok(g);
        }
        let g = method.build(&map.labels, None)?;
        self.put(&key, &g)?;
        Ok(g)
    }
}
