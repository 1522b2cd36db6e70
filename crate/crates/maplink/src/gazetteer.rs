//! Static place-name gazetteer: canonical name to its historical variants.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Gazetteer {
    entries: BTreeMap<String, Vec<String>>,
}

impl Gazetteer {
    /// Every alias list is completed with its canonical name, which always
    /// comes first; duplicates are dropped.
    pub fn new(entries: BTreeMap<String, Vec<String>>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (canonical, aliases) in entries {
            if canonical.split_whitespace().next().is_none() {
                return Err(Error::Input("gazetteer has a blank canonical name".into()));
            }
            let mut names = vec![canonical.clone()];
            for alias in aliases {
                if alias.split_whitespace().next().is_none() {
                    return Err(Error::Input(format!("gazetteer entry {canonical:?} has a blank alias")));
                }
                if !names.contains(&alias) {
                    names.push(alias);
                }
            }
            out.insert(canonical, names);
        }
        Ok(Self { entries: out })
    }

    pub fn from_json(json: &str, origin: &str) -> Result<Self> {
        let entries = serde_json::from_str(json).map_err(|e| Error::format(origin, e.to_string()))?;
        Self::new(entries)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let json = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&json, &path.display().to_string())
    }

    /// Canonical name first, then its aliases.
    pub fn variants(&self, canonical: &str) -> Result<&[String]> {
        self.entries
            .get(canonical)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownPlace {
                name: canonical.to_string(),
                available: self.entries.keys().cloned().collect(),
            })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}
