//! Sparse linkage graphs over a map's labels.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::cost::{EdgeCost, LabelId, TextLabel};
use crate::error::{Error, Result};
use crate::geometry::box_min_distance;

/// An undirected edge stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Edge {
    pub a: LabelId,
    pub b: LabelId,
    pub cost: f64,
}

impl Edge {
    pub fn new(x: LabelId, y: LabelId, cost: f64) -> Self {
        let (a, b) = if x <= y { (x, y) } else { (y, x) };
        Self { a, b, cost }
    }

    pub fn key(&self) -> (LabelId, LabelId) {
        (self.a, self.b)
    }
}

/// Vertices (label ids) plus undirected weighted edges, both kept sorted.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinkageGraph {
    label_ids: Vec<LabelId>,
    edges: Vec<Edge>,
}

impl LinkageGraph {
    /// Validates and normalizes a graph: no self-loops, no duplicate edges,
    /// endpoints must be vertices.
    pub fn new(mut label_ids: Vec<LabelId>, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        label_ids.sort_unstable();
        if label_ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input("duplicate vertex id in linkage graph"));
        }
        let mut edges: Vec<Edge> = edges.into_iter().map(|e| Edge::new(e.a, e.b, e.cost)).collect();
        edges.sort_by_key(Edge::key);
        for (i, e) in edges.iter().enumerate() {
            if e.a == e.b {
                return Err(Error::input(alloc::format!("self-loop on label {}", e.a)));
            }
            if i > 0 && edges[i - 1].key() == e.key() {
                return Err(Error::input(alloc::format!("duplicate edge ({}, {})", e.a, e.b)));
            }
            for end in [e.a, e.b] {
                if label_ids.binary_search(&end).is_err() {
                    return Err(Error::UnknownLabel(end.0));
                }
            }
            if e.cost.is_nan() || e.cost < 0.0 {
                return Err(Error::input(alloc::format!(
                    "edge ({}, {}) has invalid cost {}",
                    e.a,
                    e.b,
                    e.cost
                )));
            }
        }
        Ok(Self { label_ids, edges })
    }

    pub fn label_ids(&self) -> &[LabelId] {
        &self.label_ids
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.label_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, x: LabelId, y: LabelId) -> bool {
        let key = if x <= y { (x, y) } else { (y, x) };
        self.edges.binary_search_by(|e| e.key().cmp(&key)).is_ok()
    }

    /// Sum of edge costs, added in edge-key order.
    pub fn total_cost(&self) -> f64 {
        self.edges.iter().map(|e| e.cost).sum()
    }

    /// Sorted neighbor lists keyed by label id.
    pub fn adjacency(&self) -> BTreeMap<LabelId, Vec<LabelId>> {
        let mut adj: BTreeMap<LabelId, Vec<LabelId>> =
            self.label_ids.iter().map(|&id| (id, Vec::new())).collect();
        for e in &self.edges {
            adj.get_mut(&e.a).expect("validated endpoint").push(e.b);
            adj.get_mut(&e.b).expect("validated endpoint").push(e.a);
        }
        for list in adj.values_mut() {
            list.sort_unstable();
        }
        adj
    }

    /// Returns a copy with one extra edge.
    pub fn with_edge(&self, edge: Edge) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.push(edge);
        LinkageGraph::new(self.label_ids.clone(), edges)
    }

    /// Connected and acyclic with `n - 1` edges.
    pub fn is_spanning_tree(&self) -> bool {
        let n = self.label_ids.len();
        if n == 0 || self.edges.len() != n - 1 {
            return false;
        }
        let index = |id: LabelId| self.label_ids.binary_search(&id).expect("validated endpoint");
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let (ra, rb) = (find(&mut parent, index(e.a)), find(&mut parent, index(e.b)));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }
}

fn check_labels(labels: &[TextLabel]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::input("cannot link an empty label list"));
    }
    let mut ids: Vec<LabelId> = labels.iter().map(TextLabel::id).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::input(alloc::format!("duplicate label id {}", w[0])));
    }
    Ok(())
}

/// Orders candidate tree edges by cost, then by `(min id, max id)`.
fn edge_order(cost_x: f64, key_x: (LabelId, LabelId), cost_y: f64, key_y: (LabelId, LabelId)) -> Ordering {
    cost_x.total_cmp(&cost_y).then(key_x.cmp(&key_y))
}

fn key_of(x: LabelId, y: LabelId) -> (LabelId, LabelId) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

/// Minimum spanning tree over the complete pairwise graph (dense Prim).
///
/// Costs are evaluated lazily, once per pair, as vertices join the tree; no
/// n×n matrix is stored. Ties are broken by the smaller `(min id, max id)`
/// key, which makes the tree unique.
pub fn build_mst<C: EdgeCost + ?Sized>(labels: &[TextLabel], cost: &C) -> Result<LinkageGraph> {
    check_labels(labels)?;
    let n = labels.len();
    let ids: Vec<LabelId> = labels.iter().map(TextLabel::id).collect();

    let mut in_tree = alloc::vec![false; n];
    let mut best_cost = alloc::vec![f64::INFINITY; n];
    let mut best_from: Vec<Option<usize>> = alloc::vec![None; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));

    let start = (0..n).min_by_key(|&i| ids[i]).expect("non-empty");
    let mut current = start;
    in_tree[current] = true;
    for _ in 1..n {
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            if best_from[v].is_some() && cost.lower_bound(&labels[current], &labels[v]) > best_cost[v] {
                continue;
            }
            let c = cost.cost(&labels[current], &labels[v])?;
            if !c.is_finite() || c < 0.0 {
                return Err(Error::input(alloc::format!(
                    "edge cost between labels {} and {} is {c}",
                    ids[current],
                    ids[v]
                )));
            }
            let replace = match best_from[v] {
                None => true,
                Some(u) => {
                    edge_order(c, key_of(ids[current], ids[v]), best_cost[v], key_of(ids[u], ids[v]))
                        == Ordering::Less
                }
            };
            if replace {
                best_cost[v] = c;
                best_from[v] = Some(current);
            }
        }
        let mut next: Option<usize> = None;
        for v in (0..n).filter(|&v| !in_tree[v]) {
            next = match next {
                None => Some(v),
                Some(w) => {
                    let kv = key_of(ids[best_from[v].expect("updated")], ids[v]);
                    let kw = key_of(ids[best_from[w].expect("updated")], ids[w]);
                    if edge_order(best_cost[v], kv, best_cost[w], kw) == Ordering::Less {
                        Some(v)
                    } else {
                        Some(w)
                    }
                }
            };
        }
        let v = next.expect("vertices remain");
        let u = best_from[v].expect("updated");
        edges.push(Edge::new(ids[u], ids[v], best_cost[v]));
        in_tree[v] = true;
        current = v;
    }
    LinkageGraph::new(ids, edges)
}

/// The character-distance baseline: link every pair whose boxes are within
/// two mean character widths of each other.
pub fn build_char_threshold_graph(labels: &[TextLabel]) -> Result<LinkageGraph> {
    check_labels(labels)?;
    let mut edges = Vec::new();
    for (i, li) in labels.iter().enumerate() {
        for lj in &labels[i + 1..] {
            if let Some(d) = char_threshold_link(li, lj) {
                edges.push(Edge::new(li.id(), lj.id(), d));
            }
        }
    }
    LinkageGraph::new(labels.iter().map(TextLabel::id).collect(), edges)
}

/// Box distance when the pair passes the two-character test.
pub fn char_threshold_link(li: &TextLabel, lj: &TextLabel) -> Option<f64> {
    let d = box_min_distance(li.bbox(), lj.bbox());
    let threshold = 2.0 * (li.char_width() + lj.char_width()) / 2.0;
    (d <= threshold).then_some(d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub min: usize,
    pub mean: f64,
    pub max: usize,
    pub edge_count: usize,
}

pub fn graph_degree_stats(g: &LinkageGraph) -> DegreeStats {
    let adj = g.adjacency();
    let degrees = adj.values().map(Vec::len);
    let n = g.vertex_count();
    DegreeStats {
        min: degrees.clone().min().unwrap_or(0),
        max: degrees.max().unwrap_or(0),
        mean: if n == 0 {
            0.0
        } else {
            2.0 * g.edge_count() as f64 / n as f64
        },
        edge_count: g.edge_count(),
    }
}
