use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use maplink::index_dir::{open_index_dir, write_index_dir};
use maplink::metric_file::{load_metric, save_metric};
use maplink::report::write_cv_csv;
use maplink::svg::render_overlay;
use maplink::{load_corpus, load_map, query_place, Error, Gazetteer, MapRecord, QueryOptions, Result};
use maplink_core::{
    cross_validate, extract_pairs, learn_metric, score_map, CvOptions, LearnOptions, LinkageMethod, MatchPolicy,
    PairDataset, PhraseSearcher, Query,
};

#[derive(Parser)]
#[command(name = "maplink", version, about = "Link map text labels into place names and search for them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the linkage graph of one map and print its edges.
    Link {
        map: PathBuf,
        #[arg(long, default_value = "mst")]
        method: LinkageMethod,
        /// Learned metric file, required by the mahalanobis method.
        #[arg(long)]
        metric: Option<PathBuf>,
        /// Write an SVG overlay of boxes and edges.
        #[arg(long)]
        overlay: Option<PathBuf>,
        /// Pick one map out of a multi-tile file.
        #[arg(long)]
        map_id: Option<String>,
    },
    /// Find a multiword name along the linkage graph of one map.
    Search {
        map: PathBuf,
        name: String,
        #[arg(long, default_value = "case_insensitive")]
        policy: MatchPolicy,
        #[arg(long, default_value = "mst")]
        method: LinkageMethod,
        #[arg(long)]
        metric: Option<PathBuf>,
        #[arg(long)]
        map_id: Option<String>,
    },
    /// Cross-validate the three linkage methods on an annotated corpus.
    Eval {
        corpus: PathBuf,
        #[arg(long, default_value_t = 5)]
        folds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Negative pairs sampled per label for metric learning.
        #[arg(long, default_value_t = 5)]
        negatives: usize,
        /// Per-fold results as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Learn a Mahalanobis metric from every map of an annotated corpus.
    LearnMetric {
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 5)]
        negatives: usize,
        #[arg(long, default_value_t = 1000)]
        max_iters: usize,
    },
    /// Build a searchable index directory for a corpus.
    Index {
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Find the maps on which a place name appears.
    Query {
        index: PathBuf,
        name: String,
        /// JSON file mapping canonical names to their variants.
        #[arg(long)]
        gazetteer: Option<PathBuf>,
        #[arg(long, default_value = "case_insensitive")]
        policy: MatchPolicy,
        #[arg(long)]
        json: bool,
        /// Rebuild graphs instead of using the index's cache.
        #[arg(long)]
        no_cache: bool,
    },
}

enum Outcome {
    Found,
    NotFound,
}

fn metric_for(method: LinkageMethod, path: Option<&Path>) -> Result<Option<maplink_core::MetricMatrix>> {
    match (method, path) {
        (LinkageMethod::Mahalanobis, None) => Err(Error::Input("--method mahalanobis needs --metric <file>".into())),
        (_, Some(p)) => load_metric(p).map(Some),
        (_, None) => Ok(None),
    }
}

fn annotated_corpus(dir: &Path) -> Result<Vec<MapRecord>> {
    let maps: Vec<MapRecord> = load_corpus(dir)?.into_iter().map(|(_, m)| m).collect();
    if let Some(m) = maps.iter().find(|m| m.phrases.is_none()) {
        return Err(Error::Input(format!("map {:?} has no phrase annotations", m.map_id)));
    }
    Ok(maps)
}

fn pct(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".into(), |x| format!("{:.2}", 100.0 * x))
}

fn run(cli: Cli) -> Result<Outcome> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let w = |e: io::Error| Error::io("<stdout>", e);
    match cli.command {
        Command::Link {
            map,
            method,
            metric,
            overlay,
            map_id,
        } => {
            let record = load_map(&map, map_id.as_deref())?;
            let m = metric_for(method, metric.as_deref())?;
            let graph = method.build(&record.labels, m.as_ref())?;
            writeln!(out, "a\tb\tcost").map_err(w)?;
            for e in graph.edges() {
                writeln!(out, "{}\t{}\t{}", e.a, e.b, e.cost).map_err(w)?;
            }
            if let Some(phrases) = &record.phrases {
                let s = score_map(&graph, phrases)?;
                eprintln!(
                    "{}: {} edges, precision {} recall {}",
                    record.map_id,
                    graph.edge_count(),
                    pct(s.precision()),
                    pct(s.recall())
                );
            }
            if let Some(path) = overlay {
                let svg = render_overlay(&record.labels, &graph, record.phrases.as_deref());
                fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
            }
            Ok(Outcome::Found)
        }
        Command::Search {
            map,
            name,
            policy,
            method,
            metric,
            map_id,
        } => {
            let record = load_map(&map, map_id.as_deref())?;
            let m = metric_for(method, metric.as_deref())?;
            let graph = method.build(&record.labels, m.as_ref())?;
            let query = Query::parse(&name, policy)?;
            let paths = PhraseSearcher::new(&graph, &record.labels).find(&query);
            for p in &paths {
                let ids: Vec<String> = p.ids().iter().map(ToString::to_string).collect();
                let texts: Vec<&str> = p.ids().iter().filter_map(|&id| record.label(id)).map(|l| l.text()).collect();
                writeln!(out, "{}\t{}", ids.join(" "), texts.join(" ")).map_err(w)?;
            }
            Ok(if paths.is_empty() { Outcome::NotFound } else { Outcome::Found })
        }
        Command::Eval {
            corpus,
            folds,
            seed,
            negatives,
            out: csv_path,
        } => {
            let maps = annotated_corpus(&corpus)?;
            let views: Vec<_> = maps.iter().filter_map(MapRecord::annotated).collect();
            let cv = cross_validate(
                &views,
                CvOptions {
                    folds,
                    seed,
                    negatives_per_label: negatives,
                    learn: LearnOptions::default(),
                },
            )?;
            writeln!(out, "method\tprecision\trecall").map_err(w)?;
            for s in &cv.summary {
                writeln!(out, "{}\t{}\t{}", s.method, pct(s.precision), pct(s.recall)).map_err(w)?;
            }
            if let Some(path) = csv_path {
                let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
                write_cv_csv(file, &cv)?;
            }
            Ok(Outcome::Found)
        }
        Command::LearnMetric {
            corpus,
            out: path,
            negatives,
            max_iters,
        } => {
            let maps = annotated_corpus(&corpus)?;
            let mut data = PairDataset::default();
            for view in maps.iter().filter_map(MapRecord::annotated) {
                data.extend(extract_pairs(&view, negatives)?);
            }
            let r = learn_metric(
                &data,
                LearnOptions {
                    max_iters,
                    ..LearnOptions::default()
                },
            )?;
            save_metric(&path, &r.matrix)?;
            writeln!(
                out,
                "{} positive / {} negative pairs, {} iterations, objective {}",
                data.positives.len(),
                data.negatives.len(),
                r.iterations,
                r.objective_trace.last().copied().unwrap_or(f64::NAN)
            )
            .map_err(w)?;
            Ok(Outcome::Found)
        }
        Command::Index { corpus, out: dir } => {
            let records = load_corpus(&corpus)?;
            let index = write_index_dir(&dir, &records)?;
            writeln!(out, "indexed {} maps, {} distinct words", records.len(), index.word_count()).map_err(w)?;
            Ok(Outcome::Found)
        }
        Command::Query {
            index,
            name,
            gazetteer,
            policy,
            json,
            no_cache,
        } => {
            let opened = open_index_dir(&index)?;
            let gazetteer = gazetteer.map(Gazetteer::load).transpose()?;
            let options = QueryOptions {
                policy,
                cache: (!no_cache).then_some(opened.cache),
            };
            let report = query_place(&opened.index, &opened.maps, &name, gazetteer.as_ref(), &options)?;
            if json {
                let text = serde_json::to_string_pretty(&report).expect("reports always serialize");
                writeln!(out, "{text}").map_err(w)?;
            } else {
                for m in &report.matches {
                    let year = m.year.map_or_else(|| "-".to_string(), |y| y.to_string());
                    writeln!(out, "{}\t{year}\t{}\t{} path(s)", m.map_id, m.variant, m.paths.len()).map_err(w)?;
                }
                let span = report.year_span.map_or_else(|| "undefined".to_string(), |s| s.to_string());
                writeln!(out, "maps: {}, year span: {span}", report.map_count).map_err(w)?;
            }
            Ok(if report.map_count == 0 { Outcome::NotFound } else { Outcome::Found })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Found) => ExitCode::SUCCESS,
        Ok(Outcome::NotFound) => ExitCode::from(1),
        Err(e) => {
            eprintln!("maplink: {e}");
            ExitCode::from(2)
        }
    }
}
