//! The on-disk layout written by `maplink index`: the inverted index, a
//! manifest locating every map in the corpus, and the graph cache.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::GraphCache;
use crate::error::{Error, Result};
use crate::index::{build_index, CorpusIndex};
use crate::record::{load_maps, MapRecord};

pub const INDEX_FILE: &str = "index.json";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const CACHE_DIR: &str = "cache";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub map_id: String,
    pub file: PathBuf,
    pub year: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub maps: Vec<ManifestEntry>,
}

pub struct OpenIndex {
    pub index: CorpusIndex,
    pub maps: Vec<MapRecord>,
    pub cache: GraphCache,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let json = serde_json::to_vec(value).expect("index structures always serialize");
    fs::write(path, json).map_err(|e| Error::io(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::format(path.display().to_string(), e.to_string()))
}

/// Indexes `corpus` (as returned by `load_corpus`) into `out`.
pub fn write_index_dir(out: &Path, corpus: &[(PathBuf, MapRecord)]) -> Result<CorpusIndex> {
    let maps: Vec<MapRecord> = corpus.iter().map(|(_, m)| m.clone()).collect();
    let index = build_index(&maps)?;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    GraphCache::open(out.join(CACHE_DIR))?;
    let mut entries = Vec::with_capacity(corpus.len());
    for (file, m) in corpus {
        let file = fs::canonicalize(file).map_err(|e| Error::io(file, e))?;
        entries.push(ManifestEntry {
            map_id: m.map_id.clone(),
            file,
            year: m.year,
        });
    }
    write_json(&out.join(INDEX_FILE), &index)?;
    write_json(&out.join(MANIFEST_FILE), &Manifest { maps: entries })?;
    Ok(index)
}

/// Reloads the index and every map listed in the manifest.
pub fn open_index_dir(dir: &Path) -> Result<OpenIndex> {
    let index: CorpusIndex = read_json(&dir.join(INDEX_FILE))?;
    let manifest: Manifest = read_json(&dir.join(MANIFEST_FILE))?;
    let wanted: BTreeMap<&str, &Path> = manifest
        .maps
        .iter()
        .map(|e| (e.map_id.as_str(), e.file.as_path()))
        .collect();
    let files: BTreeSet<&Path> = wanted.values().copied().collect();
    let loaded: Vec<Vec<MapRecord>> = files.par_iter().map(load_maps).collect::<Result<_>>()?;
    let mut maps: Vec<MapRecord> = loaded
        .into_iter()
        .flatten()
        .filter(|m| wanted.contains_key(m.map_id.as_str()))
        .collect();
    maps.sort_by(|a, b| a.map_id.cmp(&b.map_id));
    maps.dedup_by(|a, b| a.map_id == b.map_id);
    if maps.len() != wanted.len() {
        let found: BTreeSet<&str> = maps.iter().map(|m| m.map_id.as_str()).collect();
        let missing: Vec<&str> = wanted.keys().filter(|id| !found.contains(*id)).copied().collect();
        return Err(Error::Input(format!(
            "maps listed in the manifest could not be loaded: {}",
            missing.join(", ")
        )));
    }
    Ok(OpenIndex {
        index,
        maps,
        cache: GraphCache::open(dir.join(CACHE_DIR))?,
    })
}
