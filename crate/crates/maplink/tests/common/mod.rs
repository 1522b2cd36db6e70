#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use maplink::{Gazetteer, MapRecord};
use maplink_core::synth::{chain_map, ChainLayout};
use maplink_core::{LabelId, OwnedMap, TextLabel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const PLANTED_WORDS: [&str; 10] = [
    "north", "dakota", "fort", "brady", "st.", "mary's", "falls", "sault", "ste.", "marie",
];

pub const GAZETTEER: &str = r#"{
    "Sault Ste. Marie": ["Sault Ste. Marie", "St. Mary's Falls", "Fort Brady"],
    "North Dakota": []
}"#;

/// What was planted on one map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plant {
    AdjacentNorthDakota,
    ScatteredNorthDakota,
    AdjacentFortBrady,
    AdjacentStMarysFalls,
    ScatteredFortBrady,
}

pub struct PlantedCorpus {
    pub maps: Vec<MapRecord>,
    pub plants: BTreeMap<String, Plant>,
    pub gazetteer: Gazetteer,
}

impl PlantedCorpus {
    pub fn ids_with(&self, kinds: &[Plant]) -> BTreeSet<String> {
        self.plants
            .iter()
            .filter(|(_, p)| kinds.contains(p))
            .map(|(id, _)| id.clone())
            .collect()
    }

    pub fn year_of(&self, id: &str) -> Option<i32> {
        self.maps.iter().find(|m| m.map_id == id).and_then(|m| m.year)
    }
}

fn row_of(map: &OwnedMap, id: LabelId, pitch: f64) -> usize {
    (map.labels[id.0 as usize].bbox().center.y / pitch).round() as usize
}

fn rename(map: &mut OwnedMap, id: LabelId, text: &str) {
    let old = &map.labels[id.0 as usize];
    map.labels[id.0 as usize] = TextLabel::new(id, text, old.polygon().clone()).unwrap();
}

/// A chain map with at least six rows, a 3-word phrase in the first row and
/// no filler word that collides with a planted word.
fn base_map(rng: &mut ChaCha8Rng, id: &str, labels: usize) -> OwnedMap {
    let layout = ChainLayout {
        row_width: 800.0,
        ..ChainLayout::default()
    };
    let pitch = layout.height + layout.inter_gap;
    loop {
        let map = chain_map(rng, id, labels, layout);
        let rows = map.labels.iter().map(|l| (l.bbox().center.y / pitch).round() as usize).max().unwrap_or(0);
        let long_first = map
            .phrases
            .iter()
            .any(|p| p.label_ids.len() >= 3 && row_of(&map, p.label_ids[0], pitch) == 0);
        let clean = map.labels.iter().all(|l| !PLANTED_WORDS.contains(&l.text()));
        if rows >= 5 && long_first && clean {
            return map;
        }
    }
}

/// Plants `words` as the leading words of the first long phrase in row 0.
fn plant_adjacent(map: &mut OwnedMap, words: &[&str]) {
    let pitch = ChainLayout::default().height + ChainLayout::default().inter_gap;
    let phrase = map
        .phrases
        .iter()
        .find(|p| p.label_ids.len() >= 3 && row_of(map, p.label_ids[0], pitch) == 0)
        .unwrap()
        .clone();
    for (id, w) in phrase.label_ids.iter().zip(words) {
        rename(map, *id, w);
    }
}

/// Puts `first` in the first row and `second` in the last row.
fn plant_scattered(map: &mut OwnedMap, first: &str, second: &str) {
    let pitch = ChainLayout::default().height + ChainLayout::default().inter_gap;
    let last_row = map.labels.iter().map(|l| row_of(map, l.id(), pitch)).max().unwrap();
    let a = map.labels.iter().find(|l| row_of(map, l.id(), pitch) == 0).unwrap().id();
    let b = map.labels.iter().rev().find(|l| row_of(map, l.id(), pitch) == last_row).unwrap().id();
    rename(map, a, first);
    rename(map, b, second);
}

pub fn planted_corpus(seed: u64, maps: usize) -> PlantedCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(maps);
    let mut plants = BTreeMap::new();
    for k in 0..maps {
        let id = format!("map{k:03}");
        let mut map = base_map(&mut rng, &id, 120);
        let plant = match k % 5 {
            0 => {
                plant_adjacent(&mut map, &["North", "Dakota"]);
                Plant::AdjacentNorthDakota
            }
            1 => {
                plant_scattered(&mut map, "North", "Dakota");
                Plant::ScatteredNorthDakota
            }
            2 => {
                plant_adjacent(&mut map, &["Fort", "Brady"]);
                Plant::AdjacentFortBrady
            }
            3 => {
                plant_adjacent(&mut map, &["St.", "Mary's", "Falls"]);
                Plant::AdjacentStMarysFalls
            }
            _ => {
                plant_scattered(&mut map, "Fort", "Brady");
                Plant::ScatteredFortBrady
            }
        };
        let year = (k % 4 != 3).then(|| 1650 + (k as i32 * 37) % 250);
        plants.insert(id.clone(), plant);
        out.push(MapRecord::new(id, year, map.labels, Some(map.phrases)).unwrap());
    }
    PlantedCorpus {
        maps: out,
        plants,
        gazetteer: Gazetteer::from_json(GAZETTEER, "gazetteer").unwrap(),
    }
}

/// Writes each map as its own canonical file.
pub fn write_corpus(dir: &std::path::Path, maps: &[MapRecord]) {
    std::fs::create_dir_all(dir).unwrap();
    for m in maps {
        std::fs::write(dir.join(format!("{}.json", m.map_id)), m.to_json()).unwrap();
    }
}
