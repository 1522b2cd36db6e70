//! Linking single-word map text labels into multiword phrases.
//!
//! Labels are linked with a minimum spanning tree over a visual edge cost
//! (box distance scaled by height, angle and capitalization discrepancies).
//! The resulting sparse graph is then searched for multiword place names.
//! The crate also carries the two comparison baselines (character-distance
//! threshold and a learned Mahalanobis metric) and the precision/recall
//! evaluation used to compare them.
//!
//! Everything here is pure computation and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cost;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod linalg;
pub mod linkage;
pub mod metric;
pub mod search;
pub mod synth;

pub use cost::{
    edge_cost, feature_vector, is_all_caps, mahalanobis_cost, EdgeCost, FeatureVector, LabelId,
    MetricMatrix, ProductCost, TextLabel, LARGE_RATIO,
};
pub use error::{Error, Result};
pub use eval::{
    aggregate_scores, connected_phrase_count, cross_validate, fold_assignment, score_map,
    AnnotatedMap, CrossValidation, CvOptions, FoldScore, LinkageMethod, LinkageScore,
    MethodSummary, OwnedMap, PhraseAnnotation,
};
pub use geometry::{axis_angle_diff, box_min_distance, min_area_rect, OrientedBox, Point, Polygon};
pub use linkage::{
    build_char_threshold_graph, build_mst, char_threshold_link, graph_degree_stats, DegreeStats, Edge, LinkageGraph,
};
pub use metric::{extract_pairs, learn_metric, project_psd, LearnOptions, LearnResult, PairDataset};
pub use search::{find_phrase, map_contains, LabelPath, MatchPolicy, PhraseSearcher, Query};
