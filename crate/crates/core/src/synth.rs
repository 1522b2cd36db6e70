//! Seeded generators of synthetic labels and annotated maps, used by the
//! test suites and for smoke-testing the CLI.

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::cost::TextLabel;
use crate::eval::{OwnedMap, PhraseAnnotation};
use crate::geometry::{OrientedBox, Point, Polygon};

/// Label whose polygon is exactly the given rectangle.
pub fn rect_label(id: u64, text: &str, center: Point, width: f64, height: f64, angle: f64) -> TextLabel {
    let b = OrientedBox {
        center,
        width,
        height,
        angle,
    };
    let polygon = Polygon::new(b.corners().to_vec()).expect("rectangle corners are distinct");
    TextLabel::new(id, text, polygon).expect("non-empty text")
}

pub fn random_word<R: Rng + ?Sized>(rng: &mut R, min_len: usize, max_len: usize) -> String {
    let len = rng.gen_range(min_len..=max_len);
    (0..len).map(|_| char::from(b'a' + rng.gen_range(0..26u8))).collect()
}

/// Labels scattered over a square canvas with random sizes, angles and
/// capitalization.
pub fn random_labels<R: Rng + ?Sized>(rng: &mut R, n: usize, canvas: f64) -> Vec<TextLabel> {
    (0..n)
        .map(|i| {
            let mut word = random_word(rng, 2, 9);
            if rng.gen_bool(0.3) {
                word = word.to_uppercase();
            }
            let cw = rng.gen_range(6.0..14.0);
            let height = rng.gen_range(8.0..30.0);
            // Keep clear of square boxes so the width axis is unambiguous.
            let width = (word.len() as f64 * cw).max(height * 1.2);
            let center = Point::new(rng.gen_range(0.0..canvas), rng.gen_range(0.0..canvas));
            rect_label(i as u64, &word, center, width, height, rng.gen_range(0.0..180.0))
        })
        .collect()
}

/// Layout parameters for [`chain_map`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainLayout {
    pub char_width: f64,
    pub height: f64,
    /// Inclusive range of the gap between consecutive words of a phrase.
    pub intra_gap: (f64, f64),
    /// Smallest gap between boxes of different phrases.
    pub inter_gap: f64,
    pub max_words: usize,
    pub row_width: f64,
}

impl Default for ChainLayout {
    fn default() -> Self {
        Self {
            char_width: 10.0,
            height: 20.0,
            intra_gap: (4.0, 8.0),
            inter_gap: 20.0,
            max_words: 4,
            row_width: 2000.0,
        }
    }
}

/// A map whose phrases are horizontal chains of lowercase words with equal
/// heights, separated so that every intra-phrase gap is smaller than every
/// gap between phrases.
pub fn chain_map<R: Rng + ?Sized>(rng: &mut R, id: &str, target_labels: usize, layout: ChainLayout) -> OwnedMap {
    let mut labels = Vec::with_capacity(target_labels + layout.max_words);
    let mut phrases = Vec::new();
    let row_pitch = layout.height + layout.inter_gap;
    let (mut x, mut row) = (0.0f64, 0usize);

    while labels.len() < target_labels {
        let words: Vec<String> = (0..rng.gen_range(1..=layout.max_words))
            .map(|_| random_word(rng, 2, 8))
            .collect();
        let gaps: Vec<f64> = (1..words.len())
            .map(|_| rng.gen_range(layout.intra_gap.0..=layout.intra_gap.1))
            .collect();
        let span: f64 = words.iter().map(|w| w.len() as f64 * layout.char_width).sum::<f64>()
            + gaps.iter().sum::<f64>();
        if x > 0.0 && x + span > layout.row_width {
            x = 0.0;
            row += 1;
        }
        let y = row as f64 * row_pitch;
        let mut ids = Vec::with_capacity(words.len());
        for (k, word) in words.iter().enumerate() {
            let w = word.len() as f64 * layout.char_width;
            let label_id = labels.len() as u64;
            labels.push(rect_label(label_id, word, Point::new(x + w / 2.0, y), w, layout.height, 0.0));
            ids.push(label_id);
            x += w + gaps.get(k).copied().unwrap_or(0.0);
        }
        phrases.push(PhraseAnnotation::new(ids));
        x += layout.inter_gap + rng.gen_range(0.0..layout.inter_gap);
    }

    OwnedMap {
        id: String::from(id),
        labels,
        phrases,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::box_min_distance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chain_map_respects_gap_ordering() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let map = chain_map(&mut rng, "m", 120, ChainLayout::default());
        let phrase_of: alloc::collections::BTreeMap<_, _> = map
            .phrases
            .iter()
            .enumerate()
            .flat_map(|(p, ph)| ph.label_ids.iter().map(move |&id| (id, p)))
            .collect();
        let mut max_intra = 0.0f64;
        let mut min_inter = f64::INFINITY;
        for (i, a) in map.labels.iter().enumerate() {
            for b in &map.labels[i + 1..] {
                let d = box_min_distance(a.bbox(), b.bbox());
                if phrase_of[&a.id()] != phrase_of[&b.id()] {
                    min_inter = min_inter.min(d);
                }
            }
        }
        for ph in &map.phrases {
            for w in ph.label_ids.windows(2) {
                let (a, b) = (&map.labels[w[0].0 as usize], &map.labels[w[1].0 as usize]);
                max_intra = max_intra.max(box_min_distance(a.bbox(), b.bbox()));
            }
        }
        assert!(max_intra < 0.5 * min_inter, "{max_intra} vs {min_inter}");
    }
}
