//! Planar primitives for text-label boxes.
//!
//! Coordinates are image pixels with x to the right and y pointing down.
//! Angles are reported as if y pointed up, so a box at 45° leans visually
//! counter-clockwise.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    fn total_cmp(&self, other: &Point) -> Ordering {
        self.x.total_cmp(&other.x).then(self.y.total_cmp(&other.y))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// A closed polygon with at least three vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::input(alloc::format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::input(alloc::format!(
                "polygon vertex ({}, {}) is not finite",
                p.x,
                p.y
            )));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::input(alloc::format!(
                    "polygon has repeated consecutive vertex at index {i}"
                )));
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Applies `f` to every vertex, revalidating the result.
    pub fn map(&self, f: impl FnMut(Point) -> Point) -> Result<Self> {
        Polygon::new(self.vertices.iter().copied().map(f).collect())
    }
}

/// A minimum-area rectangle around a label.
///
/// `width` is the longer side and runs along `angle`; `height` is the
/// shorter side and stands in for font size.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrientedBox {
    pub center: Point,
    pub width: f64,
    pub height: f64,
    /// Degrees in `[0, 180)` from the +x axis to the width axis.
    pub angle: f64,
}

impl OrientedBox {
    /// Unit vectors of the width and height axes in pixel coordinates.
    pub fn axes(&self) -> (Point, Point) {
        let rad = self.angle.to_radians();
        let (s, c) = (libm::sin(rad), libm::cos(rad));
        (Point::new(c, -s), Point::new(-s, -c))
    }

    /// Corners in cyclic order.
    pub fn corners(&self) -> [Point; 4] {
        let (u, v) = self.axes();
        let hu = u * (self.width / 2.0);
        let hv = v * (self.height / 2.0);
        let c = self.center;
        [c + hu + hv, c - hu + hv, c - hu - hv, c + hu - hv]
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    fn canonical_cmp(&self, other: &OrientedBox) -> Ordering {
        self.center
            .total_cmp(&other.center)
            .then(self.width.total_cmp(&other.width))
            .then(self.height.total_cmp(&other.height))
            .then(self.angle.total_cmp(&other.angle))
    }

}

fn normalize_angle(deg: f64) -> f64 {
    let mut a = deg % 180.0;
    if a < 0.0 {
        a += 180.0;
    }
    if a >= 180.0 {
        a -= 180.0;
    }
    a + 0.0
}

fn direction_angle(dir: Point) -> f64 {
    normalize_angle(libm::atan2(-dir.y, dir.x).to_degrees())
}

/// Convex hull by monotone chain, counter-clockwise in y-up terms, without
/// collinear points.
pub(crate) fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(Point::total_cmp);
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(pts.len() * 2);
    for &p in &pts {
        while hull.len() >= 2
            && (hull[hull.len() - 1] - hull[hull.len() - 2]).cross(p - hull[hull.len() - 1]) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && (hull[hull.len() - 1] - hull[hull.len() - 2]).cross(p - hull[hull.len() - 1]) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Minimum-area enclosing rectangle of the polygon's convex hull, found with
/// rotating calipers.
///
/// Collinear input yields a zero-height box spanning the hull.
pub fn min_area_rect(polygon: &Polygon) -> OrientedBox {
    let hull = convex_hull(polygon.vertices());
    match hull.len() {
        0 => unreachable!("validated polygons are non-empty"),
        1 => OrientedBox {
            center: hull[0],
            width: 0.0,
            height: 0.0,
            angle: 0.0,
        },
        2 => {
            let d = hull[1] - hull[0];
            OrientedBox {
                center: (hull[0] + hull[1]) * 0.5,
                width: d.norm(),
                height: 0.0,
                angle: direction_angle(d),
            }
        }
        _ => calipers(&hull),
    }
}

fn calipers(hull: &[Point]) -> OrientedBox {
    let n = hull.len();
    let at = |i: usize| hull[i % n];

    let mut best: Option<(f64, OrientedBox, Point, f64, f64)> = None;
    // Antipodal pointers: farthest along the edge, farthest from it, and
    // farthest against it. They only ever move forward.
    let (mut far_u, mut far_n, mut near_u) = (1usize, 1usize, 1usize);
    for i in 0..n {
        let edge = at(i + 1) - at(i);
        let u = edge * (1.0 / edge.norm());
        let nrm = Point::new(-u.y, u.x);

        let mut steps = 0;
        while steps < n && u.dot(at(far_u + 1)) > u.dot(at(far_u)) {
            far_u += 1;
            steps += 1;
        }
        if i == 0 {
            far_n = far_u;
        }
        steps = 0;
        while steps < n && nrm.dot(at(far_n + 1)) > nrm.dot(at(far_n)) {
            far_n += 1;
            steps += 1;
        }
        if i == 0 {
            near_u = far_n;
        }
        steps = 0;
        while steps < n && u.dot(at(near_u + 1)) < u.dot(at(near_u)) {
            near_u += 1;
            steps += 1;
        }

        let hi_u = u.dot(at(far_u));
        let lo_u = u.dot(at(near_u));
        let lo_n = nrm.dot(at(i));
        let len_u = hi_u - lo_u;
        let len_n = nrm.dot(at(far_n)) - lo_n;
        let area = len_u * len_n;

        let better = match &best {
            None => true,
            Some((best_area, ..)) => area < *best_area - 1e-12 * *best_area,
        };
        if better {
            let center = u * ((hi_u + lo_u) / 2.0) + nrm * (lo_n + len_n / 2.0);
            let placeholder = OrientedBox {
                center,
                width: 0.0,
                height: 0.0,
                angle: 0.0,
            };
            best = Some((area, placeholder, u, len_u, len_n));
        }
    }

    let (_, mut rect, u, len_u, len_n) = best.expect("hull has at least three edges");
    // Exact squares keep the edge direction the calipers settled on.
    let axis = if len_n > len_u {
        Point::new(-u.y, u.x)
    } else {
        u
    };
    rect.width = len_u.max(len_n);
    rect.height = len_u.min(len_n);
    rect.angle = direction_angle(axis);
    rect
}

fn point_segment_distance2(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((p - a).dot(ab) / len2).clamp(0.0, 1.0)
    };
    let d = p - (a + ab * t);
    d.dot(d)
}

/// A box with its axes and corners evaluated once, for repeated distance
/// queries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BoxFrame {
    pub(crate) bbox: OrientedBox,
    u: Point,
    v: Point,
    corners: [Point; 4],
    /// Half the diagonal: every point of the box is this close to the center.
    pub(crate) radius: f64,
}

impl BoxFrame {
    pub(crate) fn new(bbox: OrientedBox) -> Self {
        let (u, v) = bbox.axes();
        Self {
            bbox,
            u,
            v,
            corners: bbox.corners(),
            radius: libm::hypot(bbox.width, bbox.height) / 2.0,
        }
    }

    fn radius_along(&self, axis: Point) -> f64 {
        self.bbox.width / 2.0 * self.u.dot(axis).abs() + self.bbox.height / 2.0 * self.v.dot(axis).abs()
    }
}

/// Whether some box axis strictly separates the two rectangles.
fn separated(a: &BoxFrame, b: &BoxFrame) -> bool {
    let offset = b.bbox.center - a.bbox.center;
    [a.u, a.v, b.u, b.v]
        .into_iter()
        .any(|axis| offset.dot(axis).abs() > a.radius_along(axis) + b.radius_along(axis))
}

pub(crate) fn frame_distance(a: &BoxFrame, b: &BoxFrame) -> f64 {
    let (a, b) = if a.bbox.canonical_cmp(&b.bbox) == Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    };
    if !separated(a, b) {
        return 0.0;
    }
    // For disjoint convex polygons the closest pair involves a vertex of
    // one and an edge of the other.
    let mut best = f64::INFINITY;
    for (p, q) in [(a, b), (b, a)] {
        for i in 0..4 {
            let (q0, q1) = (q.corners[i], q.corners[(i + 1) % 4]);
            for &c in &p.corners {
                best = best.min(point_segment_distance2(c, q0, q1));
            }
        }
    }
    libm::sqrt(best)
}

/// Minimum Euclidean distance between two rectangles; zero when they
/// intersect or touch. Exactly symmetric in its arguments.
pub fn box_min_distance(a: &OrientedBox, b: &OrientedBox) -> f64 {
    frame_distance(&BoxFrame::new(*a), &BoxFrame::new(*b))
}

/// Difference between the boxes' axis directions in degrees, in `[0, 90]`.
pub fn axis_angle_diff(a: &OrientedBox, b: &OrientedBox) -> f64 {
    let d = (a.angle - b.angle).abs();
    d.min(180.0 - d)
}
