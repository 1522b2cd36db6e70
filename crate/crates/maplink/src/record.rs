//! Map files: the canonical per-map JSON document and an adapter for the
//! word/group format of the ICDAR map text competition.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use maplink_core::{LabelId, PhraseAnnotation, Point, Polygon, TextLabel};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_YEAR: i32 = 1000;
pub const MAX_YEAR: i32 = 2100;

/// One map: its labels and, when annotated, the ground-truth phrases.
#[derive(Debug, Clone, PartialEq)]
pub struct MapRecord {
    pub map_id: String,
    pub year: Option<i32>,
    pub labels: Vec<TextLabel>,
    pub phrases: Option<Vec<PhraseAnnotation>>,
}

impl MapRecord {
    /// Validates label-id uniqueness, phrase references and the year range.
    pub fn new(
        map_id: impl Into<String>,
        year: Option<i32>,
        labels: Vec<TextLabel>,
        phrases: Option<Vec<PhraseAnnotation>>,
    ) -> Result<Self> {
        let map_id = map_id.into();
        if map_id.is_empty() {
            return Err(Error::Input("map_id must not be empty".into()));
        }
        let origin = || format!("map {map_id:?}");
        if let Some(y) = year {
            if !(MIN_YEAR..=MAX_YEAR).contains(&y) {
                return Err(Error::format(
                    origin(),
                    format!("year {y} outside [{MIN_YEAR}, {MAX_YEAR}]"),
                ));
            }
        }
        let mut ids = BTreeSet::new();
        for l in &labels {
            if !ids.insert(l.id()) {
                return Err(Error::format(origin(), format!("duplicate label id {}", l.id())));
            }
        }
        for (k, phrase) in phrases.iter().flatten().enumerate() {
            if phrase.label_ids.is_empty() {
                return Err(Error::format(origin(), format!("phrase {k} is empty")));
            }
            let mut seen = BTreeSet::new();
            for id in &phrase.label_ids {
                if !ids.contains(id) {
                    return Err(Error::format(origin(), format!("phrase {k} refers to unknown label {id}")));
                }
                if !seen.insert(id) {
                    return Err(Error::format(origin(), format!("phrase {k} repeats label {id}")));
                }
            }
        }
        Ok(Self {
            map_id,
            year,
            labels,
            phrases,
        })
    }

    pub fn annotated(&self) -> Option<maplink_core::AnnotatedMap<'_>> {
        self.phrases.as_deref().map(|phrases| maplink_core::AnnotatedMap {
            id: &self.map_id,
            labels: &self.labels,
            phrases,
        })
    }

    pub fn label(&self, id: LabelId) -> Option<&TextLabel> {
        self.labels.iter().find(|l| l.id() == id)
    }

    /// Canonical JSON encoding; `parse_maps` reads it back unchanged.
    pub fn to_json(&self) -> String {
        let raw = RawMap {
            map_id: self.map_id.clone(),
            year: self.year,
            labels: self
                .labels
                .iter()
                .map(|l| RawLabel {
                    id: l.id().0,
                    text: l.text().to_string(),
                    polygon: l.polygon().vertices().iter().map(|p| [p.x, p.y]).collect(),
                })
                .collect(),
            phrases: self
                .phrases
                .as_ref()
                .map(|ps| ps.iter().map(|p| p.label_ids.iter().map(|id| id.0).collect()).collect()),
        };
        serde_json::to_string_pretty(&raw).expect("map records always serialize")
    }
}

#[derive(Serialize, Deserialize)]
struct RawLabel {
    id: u64,
    text: String,
    polygon: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct RawMap {
    map_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    year: Option<i32>,
    labels: Vec<RawLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phrases: Option<Vec<Vec<u64>>>,
}

#[derive(Deserialize)]
struct IcdarWord {
    vertices: Vec<[f64; 2]>,
    #[serde(default)]
    text: String,
    #[serde(default)]
    #[allow(dead_code)]
    illegible: bool,
    #[serde(default)]
    #[allow(dead_code)]
    truncated: bool,
}

#[derive(Deserialize)]
struct IcdarTile {
    image: String,
    groups: Vec<Vec<IcdarWord>>,
}

fn make_label(origin: &str, id: u64, text: String, points: &[[f64; 2]]) -> Result<TextLabel> {
    let at = || format!("{origin}, label {id}");
    if points.len() < 3 {
        return Err(Error::format(
            at(),
            format!("polygon has {} point(s), at least 3 are required", points.len()),
        ));
    }
    let polygon = Polygon::new(points.iter().map(|&[x, y]| Point::new(x, y)).collect())
        .map_err(|e| Error::format(at(), e.to_string()))?;
    TextLabel::new(id, text, polygon).map_err(|e| Error::format(at(), e.to_string()))
}

fn from_raw(raw: RawMap, origin: &str) -> Result<MapRecord> {
    let origin = format!("{origin}: map {:?}", raw.map_id);
    let labels = raw
        .labels
        .into_iter()
        .map(|l| make_label(&origin, l.id, l.text, &l.polygon))
        .collect::<Result<Vec<_>>>()?;
    let phrases = raw
        .phrases
        .map(|ps| ps.into_iter().map(PhraseAnnotation::new).collect());
    MapRecord::new(raw.map_id, raw.year, labels, phrases)
}

/// Labels are numbered in reading order of the file; every group becomes
/// one phrase. Words with blank text carry nothing to link and are dropped,
/// together with their slot in the group.
fn from_icdar(tile: IcdarTile, origin: &str) -> Result<MapRecord> {
    let origin = format!("{origin}: image {:?}", tile.image);
    let mut labels = Vec::new();
    let mut phrases = Vec::new();
    for group in tile.groups {
        let mut ids = Vec::new();
        for word in group {
            if word.text.trim().is_empty() {
                continue;
            }
            let id = labels.len() as u64;
            labels.push(make_label(&origin, id, word.text, &word.vertices)?);
            ids.push(id);
        }
        if !ids.is_empty() {
            phrases.push(PhraseAnnotation::new(ids));
        }
    }
    MapRecord::new(tile.image, None, labels, Some(phrases))
}

/// Parses either a canonical map document or an ICDAR-style array of tiles.
/// `origin` names the source in error messages.
pub fn parse_maps(json: &str, origin: &str) -> Result<Vec<MapRecord>> {
    let value: serde_json::Value =
        serde_json::from_str(json).map_err(|e| Error::format(origin, format!("malformed JSON: {e}")))?;
    let bad = |e: serde_json::Error| Error::format(origin, e.to_string());
    match value {
        serde_json::Value::Object(_) => {
            let raw: RawMap = serde_json::from_value(value).map_err(bad)?;
            Ok(vec![from_raw(raw, origin)?])
        }
        serde_json::Value::Array(_) => {
            let tiles: Vec<IcdarTile> = serde_json::from_value(value).map_err(bad)?;
            tiles.into_iter().map(|t| from_icdar(t, origin)).collect()
        }
        _ => Err(Error::format(origin, "expected a map object or an array of tiles")),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// All maps stored in one file.
pub fn load_maps(path: impl AsRef<Path>) -> Result<Vec<MapRecord>> {
    let path = path.as_ref();
    parse_maps(&read(path)?, &path.display().to_string())
}

/// The single map in `path`. Multi-tile files need `map_id` to pick one.
pub fn load_map(path: impl AsRef<Path>, map_id: Option<&str>) -> Result<MapRecord> {
    let path = path.as_ref();
    let mut maps = load_maps(path)?;
    let origin = path.display().to_string();
    match map_id {
        Some(id) => {
            let pos = maps
                .iter()
                .position(|m| m.map_id == id)
                .ok_or_else(|| Error::format(&origin, format!("no map with id {id:?}")))?;
            Ok(maps.swap_remove(pos))
        }
        None if maps.len() == 1 => Ok(maps.pop().expect("length checked")),
        None => Err(Error::format(
            origin,
            format!("file holds {} maps; select one by id", maps.len()),
        )),
    }
}

/// Every `*.json` file directly inside `dir`, in file-name order, paired
/// with the maps it holds. Map ids must be unique across the corpus.
pub fn load_corpus(dir: impl AsRef<Path>) -> Result<Vec<(PathBuf, MapRecord)>> {
    let dir = dir.as_ref();
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|x| x == "json") {
            files.push(path);
        }
    }
    files.sort();
    let per_file: Vec<Vec<(PathBuf, MapRecord)>> = files
        .par_iter()
        .map(|p| Ok(load_maps(p)?.into_iter().map(|m| (p.clone(), m)).collect()))
        .collect::<Result<_>>()?;
    let corpus: Vec<(PathBuf, MapRecord)> = per_file.into_iter().flatten().collect();
    let mut seen = BTreeSet::new();
    for (path, m) in &corpus {
        if !seen.insert(m.map_id.as_str()) {
            return Err(Error::format(
                path.display().to_string(),
                format!("duplicate map_id {:?} in corpus", m.map_id),
            ));
        }
    }
    Ok(corpus)
}
