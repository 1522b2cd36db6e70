//! Inverted index from case-folded label words to the maps carrying them.

use std::collections::{BTreeMap, BTreeSet};

use maplink_core::{LabelId, MatchPolicy};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::MapRecord;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Posting {
    pub map_id: String,
    pub label_id: LabelId,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CorpusIndex {
    postings: BTreeMap<String, Vec<Posting>>,
}

/// Index key of a label text or query word.
pub fn fold(word: &str) -> String {
    MatchPolicy::CaseInsensitive.normalize(word)
}

pub fn build_index(maps: &[MapRecord]) -> Result<CorpusIndex> {
    let mut ids = BTreeSet::new();
    for m in maps {
        if !ids.insert(m.map_id.as_str()) {
            return Err(Error::Input(format!("duplicate map_id {:?}", m.map_id)));
        }
    }
    let per_map: Vec<BTreeMap<String, Vec<Posting>>> = maps
        .par_iter()
        .map(|m| {
            let mut local: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
            for l in &m.labels {
                local.entry(fold(l.text())).or_default().push(Posting {
                    map_id: m.map_id.clone(),
                    label_id: l.id(),
                });
            }
            local
        })
        .collect();
    let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
    for local in per_map {
        for (word, list) in local {
            postings.entry(word).or_default().extend(list);
        }
    }
    postings.par_iter_mut().for_each(|(_, list)| list.sort_unstable());
    Ok(CorpusIndex { postings })
}

impl CorpusIndex {
    pub fn postings(&self, key: &str) -> &[Posting] {
        self.postings.get(key).map_or(&[], Vec::as_slice)
    }

    pub fn words(&self) -> impl Iterator<Item = (&str, &[Posting])> {
        self.postings.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn word_count(&self) -> usize {
        self.postings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.postings.is_empty()
    }

    /// Maps with at least one label that may match `word` under `policy`.
    /// A superset of the true matches: exact matching is checked later.
    pub fn maps_with_word(&self, word: &str, policy: MatchPolicy) -> BTreeSet<&str> {
        let lists: Vec<&[Posting]> = match policy {
            MatchPolicy::Exact | MatchPolicy::CaseInsensitive => vec![self.postings(&fold(word))],
            MatchPolicy::Normalized => {
                let target = policy.normalize(word);
                self.postings
                    .iter()
                    .filter(|(k, _)| policy.normalize(k) == target)
                    .map(|(_, v)| v.as_slice())
                    .collect()
            }
        };
        lists.into_iter().flatten().map(|p| p.map_id.as_str()).collect()
    }

    /// The all-words prefilter: maps holding every word of `words`.
    pub fn candidate_maps(&self, words: &[String], policy: MatchPolicy) -> BTreeSet<&str> {
        let mut iter = words.iter();
        let Some(first) = iter.next() else {
            return BTreeSet::new();
        };
        let mut acc = self.maps_with_word(first, policy);
        for w in iter {
            if acc.is_empty() {
                break;
            }
            let next = self.maps_with_word(w, policy);
            acc.retain(|id| next.contains(id));
        }
        acc
    }
}
