//! File formats, corpus indexing and place-name queries on top of
//! `maplink-core`, plus the pieces the `maplink` binary is made of.

#![forbid(unsafe_code)]

pub mod cache;
pub mod error;
pub mod gazetteer;
pub mod index;
pub mod index_dir;
pub mod metric_file;
pub mod query;
pub mod record;
pub mod report;
pub mod svg;

pub use cache::GraphCache;
pub use error::{Error, Result};
pub use gazetteer::Gazetteer;
pub use index::{build_index, CorpusIndex, Posting};
pub use query::{corpus_stats, query_place, CorpusStats, MapMatch, QueryOptions, QueryReport};
pub use record::{load_corpus, load_map, load_maps, parse_maps, MapRecord};
