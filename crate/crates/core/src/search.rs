//! Multiword phrase search over a linkage graph.
//!
//! Every label matching the first query word anchors a depth-first walk
//! that follows graph edges to labels matching the next word, never
//! revisiting a label within one path.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::cost::{LabelId, TextLabel};
use crate::error::{Error, Result};
use crate::linkage::LinkageGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MatchPolicy {
    Exact,
    #[default]
    CaseInsensitive,
    /// Case-insensitive after trimming leading and trailing punctuation.
    Normalized,
}

impl MatchPolicy {
    /// Canonical form of a word under this policy.
    pub fn normalize(self, word: &str) -> String {
        match self {
            MatchPolicy::Exact => word.to_string(),
            MatchPolicy::CaseInsensitive => word.to_lowercase(),
            MatchPolicy::Normalized => word
                .trim_matches(|c: char| !c.is_alphanumeric())
                .to_lowercase(),
        }
    }

    pub fn matches(self, query_word: &str, label_text: &str) -> bool {
        match self {
            MatchPolicy::Exact => query_word == label_text,
            _ => self.normalize(query_word) == self.normalize(label_text),
        }
    }
}

impl core::str::FromStr for MatchPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(MatchPolicy::Exact),
            "case_insensitive" | "case-insensitive" => Ok(MatchPolicy::CaseInsensitive),
            "normalized" => Ok(MatchPolicy::Normalized),
            other => Err(Error::input(alloc::format!("unknown match policy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    words: Vec<String>,
    policy: MatchPolicy,
}

impl Query {
    pub fn new(words: Vec<String>, policy: MatchPolicy) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::input("query has no words"));
        }
        if words.iter().any(|w| w.trim().is_empty()) {
            return Err(Error::input("query contains an empty word"));
        }
        Ok(Self { words, policy })
    }

    /// Splits a name on whitespace.
    pub fn parse(name: &str, policy: MatchPolicy) -> Result<Self> {
        Query::new(name.split_whitespace().map(String::from).collect(), policy)
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn policy(&self) -> MatchPolicy {
        self.policy
    }
}

/// Ordered, distinct label ids forming one match.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct LabelPath(pub Vec<LabelId>);

impl LabelPath {
    pub fn ids(&self) -> &[LabelId] {
        &self.0
    }
}

/// Precomputed adjacency and label lookup for repeated queries on one map.
#[derive(Debug, Clone)]
pub struct PhraseSearcher<'a> {
    adjacency: BTreeMap<LabelId, Vec<LabelId>>,
    labels: BTreeMap<LabelId, &'a TextLabel>,
}

impl<'a> PhraseSearcher<'a> {
    pub fn new(graph: &LinkageGraph, labels: &'a [TextLabel]) -> Self {
        Self {
            adjacency: graph.adjacency(),
            labels: labels.iter().map(|l| (l.id(), l)).collect(),
        }
    }

    /// All label paths spelling the query, sorted by id sequence.
    pub fn find(&self, query: &Query) -> Vec<LabelPath> {
        let policy = query.policy();
        let words: Vec<String> = query.words().iter().map(|w| policy.normalize(w)).collect();
        let texts: BTreeMap<LabelId, String> = self
            .labels
            .iter()
            .map(|(&id, l)| (id, policy.normalize(l.text())))
            .collect();
        let matches = |id: LabelId, k: usize| texts.get(&id) == Some(&words[k]);

        let mut out = Vec::new();
        let mut path = Vec::with_capacity(words.len());
        for &start in self.adjacency.keys() {
            if matches(start, 0) {
                path.push(start);
                self.extend(&mut path, &words, &matches, &mut out);
                path.pop();
            }
        }
        out.sort();
        out
    }

    fn extend(
        &self,
        path: &mut Vec<LabelId>,
        words: &[String],
        matches: &dyn Fn(LabelId, usize) -> bool,
        out: &mut Vec<LabelPath>,
    ) {
        let k = path.len();
        if k == words.len() {
            out.push(LabelPath(path.clone()));
            return;
        }
        let last = *path.last().expect("anchored");
        for &next in &self.adjacency[&last] {
            if !path.contains(&next) && matches(next, k) {
                path.push(next);
                self.extend(path, words, matches, out);
                path.pop();
            }
        }
    }
}

pub fn find_phrase(graph: &LinkageGraph, labels: &[TextLabel], query: &Query) -> Vec<LabelPath> {
    PhraseSearcher::new(graph, labels).find(query)
}

pub fn map_contains(graph: &LinkageGraph, labels: &[TextLabel], query: &Query) -> bool {
    !find_phrase(graph, labels, query).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{OrientedBox, Point, Polygon};
    use crate::linkage::Edge;
    use alloc::vec;

    fn label(id: u64, text: &str) -> TextLabel {
        let b = OrientedBox {
            center: Point::new(id as f64 * 100.0, 0.0),
            width: 40.0,
            height: 10.0,
            angle: 0.0,
        };
        TextLabel::new(id, text, Polygon::new(b.corners().to_vec()).unwrap()).unwrap()
    }

    fn graph(labels: &[TextLabel], edges: &[(u64, u64)]) -> LinkageGraph {
        LinkageGraph::new(
            labels.iter().map(TextLabel::id).collect(),
            edges.iter().map(|&(a, b)| Edge::new(LabelId(a), LabelId(b), 1.0)),
        )
        .unwrap()
    }

    fn q(s: &str) -> Query {
        Query::parse(s, MatchPolicy::default()).unwrap()
    }

    fn path(ids: &[u64]) -> LabelPath {
        LabelPath(ids.iter().map(|&i| LabelId(i)).collect())
    }

    #[test]
    fn sault_ste_marie_chain() {
        let labels = vec![label(1, "Sault"), label(2, "Ste."), label(3, "Marie")];
        let g = graph(&labels, &[(1, 2), (2, 3)]);
        assert_eq!(find_phrase(&g, &labels, &q("Sault Ste. Marie")), vec![path(&[1, 2, 3])]);
        assert!(map_contains(&g, &labels, &q("Sault Ste. Marie")));
        assert!(!map_contains(&g, &labels, &q("Sault Ste Marie")));
        let normalized = Query::parse("sault ste marie", MatchPolicy::Normalized).unwrap();
        assert!(map_contains(&g, &labels, &normalized));
    }

    #[test]
    fn single_word_returns_every_text_match() {
        let labels = vec![label(1, "North"), label(2, "Dakota")];
        let g = graph(&labels, &[]);
        assert_eq!(find_phrase(&g, &labels, &q("Dakota")), vec![path(&[2])]);
    }

    #[test]
    fn non_adjacent_words_do_not_match() {
        let labels = vec![label(1, "North"), label(2, "compass"), label(3, "Dakota")];
        let g = graph(&labels, &[(1, 2), (2, 3)]);
        assert!(find_phrase(&g, &labels, &q("North Dakota")).is_empty());
    }

    #[test]
    fn empty_and_missing() {
        let g = LinkageGraph::default();
        assert!(!map_contains(&g, &[], &q("North Dakota")));
        let labels = vec![label(1, "North")];
        let g = graph(&labels, &[]);
        assert!(!map_contains(&g, &labels, &q("Atlantis")));
    }

    #[test]
    fn repeated_word_needs_distinct_labels() {
        let labels = vec![label(1, "Baden")];
        let g = graph(&labels, &[]);
        assert!(find_phrase(&g, &labels, &q("Baden Baden")).is_empty());
        let labels = vec![label(1, "Baden"), label(2, "Baden")];
        let g = graph(&labels, &[(1, 2)]);
        assert_eq!(
            find_phrase(&g, &labels, &q("Baden Baden")),
            vec![path(&[1, 2]), path(&[2, 1])]
        );
    }

    #[test]
    fn policies() {
        assert!(MatchPolicy::Exact.matches("Ste.", "Ste."));
        assert!(!MatchPolicy::Exact.matches("ste.", "Ste."));
        assert!(MatchPolicy::CaseInsensitive.matches("STE.", "ste."));
        assert!(!MatchPolicy::CaseInsensitive.matches("Ste", "Ste."));
        assert!(MatchPolicy::Normalized.matches("Ste", "(Ste.)"));
        assert_eq!("normalized".parse::<MatchPolicy>().unwrap(), MatchPolicy::Normalized);
        assert!("fuzzy".parse::<MatchPolicy>().is_err());
    }

    #[test]
    fn query_validation() {
        assert!(Query::parse("   ", MatchPolicy::Exact).is_err());
        assert!(Query::new(vec![String::from("a"), String::new()], MatchPolicy::Exact).is_err());
    }
}
