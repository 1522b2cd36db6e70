//! Brute-force reference implementations shared by the oracle tests and
//! the acceptance suite. None of these call into the code they check,
//! beyond reading label fields.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use maplink_core::{LabelId, MatchPolicy, OrientedBox, Point};

/// Extents-product area of the rectangle aligned with direction `theta`.
fn aligned_area(points: &[Point], theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let (mut lo_u, mut hi_u, mut lo_v, mut hi_v) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in points {
        let u = p.x * c + p.y * s;
        let v = -p.x * s + p.y * c;
        lo_u = lo_u.min(u);
        hi_u = hi_u.max(u);
        lo_v = lo_v.min(v);
        hi_v = hi_v.max(v);
    }
    (hi_u - lo_u) * (hi_v - lo_v)
}

/// Minimum enclosing-rectangle area from a 0.05° orientation sweep over
/// [0°, 90°), refined by a 1e-5° sweep within one coarse step of the three
/// best coarse angles.
pub fn sweep_min_area(points: &[Point]) -> f64 {
    let coarse_step = 0.05f64.to_radians();
    let steps = (90.0 / 0.05) as usize;
    let mut coarse: Vec<(f64, f64)> = (0..steps)
        .map(|k| {
            let t = k as f64 * coarse_step;
            (aligned_area(points, t), t)
        })
        .collect();
    coarse.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = coarse[0].0;
    let fine_step = 1e-5f64.to_radians();
    let fine_steps = (2.0 * coarse_step / fine_step) as usize;
    for &(_, t0) in coarse.iter().take(3) {
        for k in 0..=fine_steps {
            let t = t0 - coarse_step + k as f64 * fine_step;
            best = best.min(aligned_area(points, t));
        }
    }
    best
}

fn point_segment(p: Point, a: Point, b: Point) -> f64 {
    let (abx, aby) = (b.x - a.x, b.y - a.y);
    let len2 = abx * abx + aby * aby;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * abx + (p.y - a.y) * aby) / len2).clamp(0.0, 1.0)
    };
    ((p.x - a.x - t * abx).powi(2) + (p.y - a.y - t * aby).powi(2)).sqrt()
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Point inside or on a convex polygon given in cyclic order.
pub fn in_convex(p: Point, poly: &[Point]) -> bool {
    let n = poly.len();
    let (mut pos, mut neg) = (false, false);
    for i in 0..n {
        let o = orient(poly[i], poly[(i + 1) % n], p);
        if o > 1e-12 {
            pos = true;
        }
        if o < -1e-12 {
            neg = true;
        }
    }
    !(pos && neg)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) - 1e-12
        && p.x <= a.x.max(b.x) + 1e-12
        && p.y >= a.y.min(b.y) - 1e-12
        && p.y <= a.y.max(b.y) + 1e-12
}

pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)) {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

/// Polygon intersection via edge crossings and vertex containment.
pub fn convex_polygons_intersect(a: &[Point], b: &[Point]) -> bool {
    for i in 0..a.len() {
        for j in 0..b.len() {
            if segments_intersect(a[i], a[(i + 1) % a.len()], b[j], b[(j + 1) % b.len()]) {
                return true;
            }
        }
    }
    in_convex(a[0], b) || in_convex(b[0], a)
}

fn boundary_samples(corners: &[Point; 4], per_edge: usize) -> Vec<Point> {
    let mut out = Vec::with_capacity(4 * per_edge);
    for i in 0..4 {
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        for k in 0..per_edge {
            let t = k as f64 / per_edge as f64;
            out.push(Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
        }
    }
    out
}

fn sample_to_polygon(samples: &[Point], poly: &[Point; 4]) -> f64 {
    samples
        .iter()
        .map(|&p| {
            if in_convex(p, poly) {
                0.0
            } else {
                (0..4)
                    .map(|j| point_segment(p, poly[j], poly[(j + 1) % 4]))
                    .fold(f64::INFINITY, f64::min)
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Box distance from 10⁴ boundary samples per box, each measured to the
/// other box's outline.
pub fn sampled_box_distance(a: &OrientedBox, b: &OrientedBox) -> f64 {
    let (ca, cb) = (a.corners(), b.corners());
    let sa = boundary_samples(&ca, 2500);
    let sb = boundary_samples(&cb, 2500);
    sample_to_polygon(&sa, &cb).min(sample_to_polygon(&sb, &ca))
}

/// Decodes a Prüfer sequence over `0..n` into tree edges `(i, j)`, `i < j`.
fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf.min(s), leaf.max(s)));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Exhaustive minimum spanning tree over all n^(n-2) labelled trees.
/// `cost(i, j)` is queried with `i < j`. Returns the tree count and the
/// cheapest tree's edges, sorted.
pub fn brute_force_mst(n: usize, cost: impl Fn(usize, usize) -> f64) -> (usize, Vec<(usize, usize)>) {
    assert!(n >= 2);
    let len = n - 2;
    let mut seq = vec![0usize; len];
    let mut best: Option<(f64, Vec<(usize, usize)>)> = None;
    let mut count = 0;
    loop {
        let mut edges = prufer_decode(&seq, n);
        edges.sort();
        let total: f64 = edges.iter().map(|&(i, j)| cost(i, j)).sum();
        count += 1;
        if best.as_ref().map_or(true, |(b, _)| total < *b) {
            best = Some((total, edges));
        }
        // Odometer increment.
        let mut k = 0;
        while k < len {
            seq[k] += 1;
            if seq[k] < n {
                break;
            }
            seq[k] = 0;
            k += 1;
        }
        if k == len {
            break;
        }
    }
    (count, best.unwrap().1)
}

/// All simple paths with `words.len()` vertices, found by enumerating every
/// simple path of that length first and filtering by text afterwards.
pub fn enumerate_paths(
    adjacency: &BTreeMap<LabelId, BTreeSet<LabelId>>,
    texts: &BTreeMap<LabelId, String>,
    words: &[&str],
    policy: MatchPolicy,
) -> Vec<Vec<LabelId>> {
    fn walk(
        adjacency: &BTreeMap<LabelId, BTreeSet<LabelId>>,
        path: &mut Vec<LabelId>,
        len: usize,
        out: &mut Vec<Vec<LabelId>>,
    ) {
        if path.len() == len {
            out.push(path.clone());
            return;
        }
        let last = *path.last().unwrap();
        for &n in &adjacency[&last] {
            if !path.contains(&n) {
                path.push(n);
                walk(adjacency, path, len, out);
                path.pop();
            }
        }
    }
    let mut all = Vec::new();
    for &v in adjacency.keys() {
        let mut path = vec![v];
        walk(adjacency, &mut path, words.len(), &mut all);
    }
    let fold = |s: &str| match policy {
        MatchPolicy::Exact => s.to_string(),
        MatchPolicy::CaseInsensitive => s.to_lowercase(),
        MatchPolicy::Normalized => s.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase(),
    };
    let mut out: Vec<Vec<LabelId>> = all
        .into_iter()
        .filter(|p| p.iter().zip(words).all(|(id, w)| fold(&texts[id]) == fold(w)))
        .collect();
    out.sort();
    out
}

/// Random labelled tree on `n` vertices via a random Prüfer sequence.
pub fn random_tree<R: rand::Rng>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    prufer_decode(&seq, n)
}
