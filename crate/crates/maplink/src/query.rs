//! Place-name queries over an indexed corpus.

use std::collections::{BTreeMap, BTreeSet};

use maplink_core::{find_phrase, LabelPath, LinkageMethod, MatchPolicy, Query};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::GraphCache;
use crate::error::{Error, Result};
use crate::gazetteer::Gazetteer;
use crate::index::CorpusIndex;
use crate::record::MapRecord;

#[derive(Debug, Clone, Default)]
pub struct QueryOptions {
    pub policy: MatchPolicy,
    pub cache: Option<GraphCache>,
}

/// One name variant confirmed on one map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapMatch {
    pub map_id: String,
    pub year: Option<i32>,
    pub variant: String,
    pub paths: Vec<LabelPath>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryReport {
    pub place: String,
    /// Sorted by map id, then by variant order.
    pub matches: Vec<MapMatch>,
    pub map_count: usize,
    /// Latest minus earliest year over the matched maps that are dated.
    pub year_span: Option<i32>,
}

/// Maps whose labels hold every word of some variant are linked with the
/// MST and kept only if a variant is found along a path of the tree.
pub fn query_place(
    index: &CorpusIndex,
    maps: &[MapRecord],
    name: &str,
    gazetteer: Option<&Gazetteer>,
    options: &QueryOptions,
) -> Result<QueryReport> {
    let variants: Vec<String> = match gazetteer {
        Some(g) => g.variants(name)?.to_vec(),
        None => vec![name.to_string()],
    };
    let queries: Vec<Query> = variants
        .iter()
        .map(|v| Query::parse(v, options.policy))
        .collect::<Result<_, _>>()?;

    let by_id: BTreeMap<&str, &MapRecord> = maps.iter().map(|m| (m.map_id.as_str(), m)).collect();
    // map id -> indices of variants that passed the prefilter there
    let mut candidates: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (k, q) in queries.iter().enumerate() {
        for id in index.candidate_maps(q.words(), options.policy) {
            candidates.entry(id).or_default().push(k);
        }
    }
    let work: Vec<(&MapRecord, Vec<usize>)> = candidates
        .into_iter()
        .map(|(id, ks)| {
            by_id
                .get(id)
                .map(|m| (*m, ks))
                .ok_or_else(|| Error::Input(format!("index refers to map {id:?}, which is not loaded")))
        })
        .collect::<Result<_>>()?;

    let per_map: Vec<Vec<MapMatch>> = work
        .par_iter()
        .map(|(map, ks)| {
            let graph = match &options.cache {
                Some(c) => c.get_or_build(map, LinkageMethod::Mst)?,
                None => LinkageMethod::Mst.build(&map.labels, None)?,
            };
            Ok(ks
                .iter()
                .filter_map(|&k| {
                    let paths = find_phrase(&graph, &map.labels, &queries[k]);
                    (!paths.is_empty()).then(|| MapMatch {
                        map_id: map.map_id.clone(),
                        year: map.year,
                        variant: variants[k].clone(),
                        paths,
                    })
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let matches: Vec<MapMatch> = per_map.into_iter().flatten().collect();
    let map_count = matches.iter().map(|m| m.map_id.as_str()).collect::<BTreeSet<_>>().len();
    let years: BTreeMap<&str, i32> = matches
        .iter()
        .filter_map(|m| m.year.map(|y| (m.map_id.as_str(), y)))
        .collect();
    let year_span = match (years.values().min(), years.values().max()) {
        (Some(lo), Some(hi)) => Some(hi - lo),
        _ => None,
    };
    Ok(QueryReport {
        place: name.to_string(),
        matches,
        map_count,
        year_span,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub queries: usize,
    pub mean_map_count: f64,
    /// Mean over the reports that have a defined span.
    pub mean_year_span: Option<f64>,
}

/// `None` for an empty report list.
pub fn corpus_stats(reports: &[QueryReport]) -> Option<CorpusStats> {
    if reports.is_empty() {
        return None;
    }
    let mean_map_count = reports.iter().map(|r| r.map_count as f64).sum::<f64>() / reports.len() as f64;
    let spans: Vec<f64> = reports.iter().filter_map(|r| r.year_span).map(f64::from).collect();
    let mean_year_span = (!spans.is_empty()).then(|| spans.iter().sum::<f64>() / spans.len() as f64);
    Some(CorpusStats {
        queries: reports.len(),
        mean_map_count,
        mean_year_span,
    })
}
