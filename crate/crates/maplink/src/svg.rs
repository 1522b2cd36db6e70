//! SVG overlay of labels and linkage edges, for eyeballing results.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use maplink_core::{LabelId, LinkageGraph, PhraseAnnotation, TextLabel};

const LINKED: &str = "#1a9850";
const UNLINKED: &str = "#d73027";
const SINGLE: &str = "#4575b4";

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Boxes are green for fully linked multiword phrases, red for broken ones
/// and blue otherwise; edges are green when they join consecutive phrase
/// words. Without annotations everything is drawn in the neutral colour.
pub fn render_overlay(labels: &[TextLabel], graph: &LinkageGraph, phrases: Option<&[PhraseAnnotation]>) -> String {
    let mut box_colour: BTreeMap<LabelId, &str> = BTreeMap::new();
    let mut correct: BTreeSet<(LabelId, LabelId)> = BTreeSet::new();
    for p in phrases.unwrap_or(&[]).iter().filter(|p| p.is_multiword()) {
        let linked = p.consecutive_pairs().all(|(a, b)| graph.has_edge(a, b));
        for &id in &p.label_ids {
            box_colour.insert(id, if linked { LINKED } else { UNLINKED });
        }
        for (a, b) in p.consecutive_pairs() {
            correct.insert((a.min(b), a.max(b)));
        }
    }

    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for l in labels {
        for c in l.bbox().corners() {
            lo_x = lo_x.min(c.x);
            lo_y = lo_y.min(c.y);
            hi_x = hi_x.max(c.x);
            hi_y = hi_y.max(c.y);
        }
    }
    if labels.is_empty() {
        (lo_x, lo_y, hi_x, hi_y) = (0.0, 0.0, 1.0, 1.0);
    }
    let pad = 10.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        lo_x - pad,
        lo_y - pad,
        hi_x - lo_x + 2.0 * pad,
        hi_y - lo_y + 2.0 * pad
    );
    let by_id: BTreeMap<LabelId, &TextLabel> = labels.iter().map(|l| (l.id(), l)).collect();
    for l in labels {
        let pts: Vec<String> = l.bbox().corners().iter().map(|c| format!("{},{}", c.x, c.y)).collect();
        let colour = box_colour.get(&l.id()).copied().unwrap_or(SINGLE);
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="none" stroke="{colour}"><title>{}: {}</title></polygon>"#,
            pts.join(" "),
            l.id(),
            escape(l.text())
        );
        let c = l.bbox().center;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="{}" text-anchor="middle" fill="{colour}">{}</text>"#,
            c.x,
            c.y,
            (l.bbox().height * 0.6).max(1.0),
            escape(l.text())
        );
    }
    for e in graph.edges() {
        let (Some(a), Some(b)) = (by_id.get(&e.a), by_id.get(&e.b)) else {
            continue;
        };
        let colour = if correct.contains(&e.key()) { LINKED } else { UNLINKED };
        let (p, q) = (a.bbox().center, b.bbox().center);
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{colour}" stroke-width="1.5"/>"#,
            p.x, p.y, q.x, q.y
        );
    }
    s.push_str("</svg>\n");
    s
}
