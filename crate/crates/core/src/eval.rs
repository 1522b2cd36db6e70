//! Precision and recall of linkage graphs against phrase annotations, and
//! the k-fold protocol comparing the three linkage methods.
//!
//! An edge is correct when its labels are consecutive in one annotated
//! phrase. A multiword phrase is linked when every consecutive pair of its
//! labels is an edge. Precision divides correct edges by all edges; recall
//! divides linked phrases by all multiword phrases.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cost::{LabelId, MetricMatrix, ProductCost, TextLabel};
use crate::error::{Error, Result};
use crate::linkage::{build_char_threshold_graph, build_mst, LinkageGraph};
use crate::metric::{extract_pairs, learn_metric, LearnOptions, PairDataset};

/// Ground-truth ordered labels of one phrase.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct PhraseAnnotation {
    pub label_ids: Vec<LabelId>,
}

impl PhraseAnnotation {
    pub fn new(label_ids: impl IntoIterator<Item = impl Into<LabelId>>) -> Self {
        Self {
            label_ids: label_ids.into_iter().map(Into::into).collect(),
        }
    }

    pub fn is_multiword(&self) -> bool {
        self.label_ids.len() >= 2
    }

    pub fn consecutive_pairs(&self) -> impl Iterator<Item = (LabelId, LabelId)> + '_ {
        self.label_ids.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Borrowed view of one annotated map.
#[derive(Debug, Clone, Copy)]
pub struct AnnotatedMap<'a> {
    pub id: &'a str,
    pub labels: &'a [TextLabel],
    pub phrases: &'a [PhraseAnnotation],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinkageScore {
    pub correct_edges: usize,
    pub total_edges: usize,
    pub linked_phrases: usize,
    pub total_multiword_phrases: usize,
}

impl LinkageScore {
    /// `None` when the graphs have no edges.
    pub fn precision(&self) -> Option<f64> {
        (self.total_edges > 0).then(|| self.correct_edges as f64 / self.total_edges as f64)
    }

    /// `None` when there are no multiword phrases.
    pub fn recall(&self) -> Option<f64> {
        (self.total_multiword_phrases > 0)
            .then(|| self.linked_phrases as f64 / self.total_multiword_phrases as f64)
    }
}

impl core::ops::Add for LinkageScore {
    type Output = LinkageScore;
    fn add(self, o: LinkageScore) -> LinkageScore {
        LinkageScore {
            correct_edges: self.correct_edges + o.correct_edges,
            total_edges: self.total_edges + o.total_edges,
            linked_phrases: self.linked_phrases + o.linked_phrases,
            total_multiword_phrases: self.total_multiword_phrases + o.total_multiword_phrases,
        }
    }
}

fn pair_key(x: LabelId, y: LabelId) -> (LabelId, LabelId) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

fn validate_annotations(g: &LinkageGraph, annotations: &[PhraseAnnotation]) -> Result<()> {
    for phrase in annotations {
        if phrase.label_ids.is_empty() {
            return Err(Error::input("phrase annotation has no labels"));
        }
        let mut seen = BTreeSet::new();
        for &id in &phrase.label_ids {
            if g.label_ids().binary_search(&id).is_err() {
                return Err(Error::UnknownLabel(id.0));
            }
            if !seen.insert(id) {
                return Err(Error::input(alloc::format!("label {id} repeated within one phrase")));
            }
        }
    }
    Ok(())
}

pub fn score_map(g: &LinkageGraph, annotations: &[PhraseAnnotation]) -> Result<LinkageScore> {
    validate_annotations(g, annotations)?;
    let consecutive: BTreeSet<(LabelId, LabelId)> = annotations
        .iter()
        .flat_map(|p| p.consecutive_pairs().map(|(a, b)| pair_key(a, b)))
        .collect();
    let multiword: Vec<&PhraseAnnotation> = annotations.iter().filter(|p| p.is_multiword()).collect();
    Ok(LinkageScore {
        correct_edges: g.edges().iter().filter(|e| consecutive.contains(&e.key())).count(),
        total_edges: g.edge_count(),
        linked_phrases: multiword
            .iter()
            .filter(|p| p.consecutive_pairs().all(|(a, b)| g.has_edge(a, b)))
            .count(),
        total_multiword_phrases: multiword.len(),
    })
}

/// Multiword phrases whose labels all fall in one connected component of
/// the graph; a looser alternative to the chain test of [`score_map`].
pub fn connected_phrase_count(g: &LinkageGraph, annotations: &[PhraseAnnotation]) -> Result<usize> {
    validate_annotations(g, annotations)?;
    let ids = g.label_ids();
    let mut parent: Vec<usize> = (0..ids.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let index = |id: LabelId| ids.binary_search(&id).expect("validated");
    for e in g.edges() {
        let (ra, rb) = (find(&mut parent, index(e.a)), find(&mut parent, index(e.b)));
        parent[ra] = rb;
    }
    Ok(annotations
        .iter()
        .filter(|p| p.is_multiword())
        .filter(|p| {
            let root = find(&mut parent, index(p.label_ids[0]));
            p.label_ids[1..].iter().all(|&id| find(&mut parent, index(id)) == root)
        })
        .count())
}

/// Micro-average: counts are summed before dividing.
pub fn aggregate_scores(per_map: &[LinkageScore]) -> LinkageScore {
    per_map.iter().copied().fold(LinkageScore::default(), |acc, s| acc + s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum LinkageMethod {
    /// Minimum spanning tree under the product edge cost.
    Mst,
    /// Character-distance threshold graph.
    Threshold,
    /// Minimum spanning tree under a learned Mahalanobis cost.
    Mahalanobis,
}

impl LinkageMethod {
    pub const ALL: [LinkageMethod; 3] = [
        LinkageMethod::Mst,
        LinkageMethod::Threshold,
        LinkageMethod::Mahalanobis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LinkageMethod::Mst => "mst",
            LinkageMethod::Threshold => "threshold",
            LinkageMethod::Mahalanobis => "mahalanobis",
        }
    }

    /// Builds this method's graph. Empty label lists give an empty graph.
    pub fn build(self, labels: &[TextLabel], metric: Option<&MetricMatrix>) -> Result<LinkageGraph> {
        if labels.is_empty() {
            return Ok(LinkageGraph::default());
        }
        match self {
            LinkageMethod::Mst => build_mst(labels, &ProductCost),
            LinkageMethod::Threshold => build_char_threshold_graph(labels),
            LinkageMethod::Mahalanobis => {
                let m = metric.ok_or_else(|| Error::input("mahalanobis linkage needs a metric"))?;
                build_mst(labels, m)
            }
        }
    }
}

impl fmt::Display for LinkageMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for LinkageMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LinkageMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::input(alloc::format!("unknown linkage method {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvOptions {
    pub folds: usize,
    pub seed: u64,
    pub negatives_per_label: usize,
    pub learn: LearnOptions,
}

impl Default for CvOptions {
    fn default() -> Self {
        Self {
            folds: 5,
            seed: 0,
            negatives_per_label: 5,
            learn: LearnOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldScore {
    pub method: LinkageMethod,
    pub fold: usize,
    /// Micro-averaged over the fold's test maps.
    pub score: LinkageScore,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method: LinkageMethod,
    /// Mean of defined per-fold precisions.
    pub precision: Option<f64>,
    /// Mean of defined per-fold recalls.
    pub recall: Option<f64>,
    /// Counts summed over all folds.
    pub totals: LinkageScore,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossValidation {
    /// Fold index of each input map, in input order.
    pub fold_of: Vec<usize>,
    pub folds: Vec<FoldScore>,
    pub summary: Vec<MethodSummary>,
    pub metrics: Vec<MetricMatrix>,
}

/// Deterministic fold assignment: ids are sorted, shuffled with a seeded
/// ChaCha generator, and dealt round-robin. Returned in input order.
pub fn fold_assignment(ids: &[&str], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::input("cross-validation needs at least 2 folds"));
    }
    if ids.len() < folds {
        return Err(Error::input(alloc::format!(
            "{} maps cannot fill {folds} folds",
            ids.len()
        )));
    }
    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_by(|&a, &b| ids[a].cmp(ids[b]));
    if let Some(w) = order.windows(2).find(|w| ids[w[0]] == ids[w[1]]) {
        return Err(Error::input(alloc::format!("duplicate map id {:?}", ids[w[0]])));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut fold_of = alloc::vec![0; ids.len()];
    for (pos, &idx) in order.iter().enumerate() {
        fold_of[idx] = pos % folds;
    }
    Ok(fold_of)
}

fn mean_defined(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let (sum, n) = values.flatten().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// K-fold comparison of the three linkage methods. Only the Mahalanobis
/// baseline uses the training folds.
pub fn cross_validate(corpus: &[AnnotatedMap<'_>], options: CvOptions) -> Result<CrossValidation> {
    let ids: Vec<&str> = corpus.iter().map(|m| m.id).collect();
    let fold_of = fold_assignment(&ids, options.folds, options.seed)?;

    let mut by_fold: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut sorted: Vec<usize> = (0..corpus.len()).collect();
    sorted.sort_by(|&a, &b| ids[a].cmp(ids[b]));
    for idx in sorted {
        by_fold.entry(fold_of[idx]).or_default().push(idx);
    }

    let mut folds = Vec::new();
    let mut metrics = Vec::new();
    for fold in 0..options.folds {
        let mut train = PairDataset::default();
        for (idx, map) in corpus.iter().enumerate() {
            if fold_of[idx] != fold {
                train.extend(extract_pairs(map, options.negatives_per_label)?);
            }
        }
        let metric = learn_metric(&train, options.learn)?.matrix;

        for method in LinkageMethod::ALL {
            let mut per_map = Vec::new();
            for &idx in &by_fold[&fold] {
                let map = &corpus[idx];
                let g = method.build(map.labels, Some(&metric))?;
                per_map.push(score_map(&g, map.phrases)?);
            }
            folds.push(FoldScore {
                method,
                fold,
                score: aggregate_scores(&per_map),
            });
        }
        metrics.push(metric);
    }

    let summary = LinkageMethod::ALL
        .into_iter()
        .map(|method| {
            let rows: Vec<&FoldScore> = folds.iter().filter(|f| f.method == method).collect();
            MethodSummary {
                method,
                precision: mean_defined(rows.iter().map(|f| f.score.precision())),
                recall: mean_defined(rows.iter().map(|f| f.score.recall())),
                totals: aggregate_scores(&rows.iter().map(|f| f.score).collect::<Vec<_>>()),
            }
        })
        .collect();

    Ok(CrossValidation {
        fold_of,
        folds,
        summary,
        metrics,
    })
}

/// Owned map data, handy when assembling corpora in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct OwnedMap {
    pub id: String,
    pub labels: Vec<TextLabel>,
    pub phrases: Vec<PhraseAnnotation>,
}

impl OwnedMap {
    pub fn view(&self) -> AnnotatedMap<'_> {
        AnnotatedMap {
            id: &self.id,
            labels: &self.labels,
            phrases: &self.phrases,
        }
    }
}
