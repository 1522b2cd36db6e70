//! Pairwise label features and edge costs.

use alloc::string::String;
use core::fmt;

use crate::error::{Error, Result};
use crate::geometry::{axis_angle_diff, frame_distance, min_area_rect, BoxFrame, OrientedBox, Polygon};
use crate::linalg::{self, Mat4, Vec4};

/// Height ratio used when exactly one of two boxes has zero height.
pub const LARGE_RATIO: f64 = 1e6;

/// Identifier of a label, unique within one map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct LabelId(pub u64);

impl fmt::Display for LabelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for LabelId {
    fn from(v: u64) -> Self {
        LabelId(v)
    }
}

/// One recognized word with its polygon and derived minimum-area box.
#[derive(Debug, Clone, PartialEq)]
pub struct TextLabel {
    id: LabelId,
    text: String,
    polygon: Polygon,
    frame: BoxFrame,
    all_caps: bool,
}

impl TextLabel {
    pub fn new(id: impl Into<LabelId>, text: impl Into<String>, polygon: Polygon) -> Result<Self> {
        let id = id.into();
        let text = text.into();
        if text.trim().is_empty() {
            return Err(Error::input(alloc::format!("label {id} has empty text")));
        }
        let frame = BoxFrame::new(min_area_rect(&polygon));
        let all_caps = is_all_caps(&text);
        Ok(Self {
            id,
            text,
            polygon,
            frame,
            all_caps,
        })
    }

    pub fn id(&self) -> LabelId {
        self.id
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn bbox(&self) -> &OrientedBox {
        &self.frame.bbox
    }

    pub fn is_all_caps(&self) -> bool {
        self.all_caps
    }

    /// Box width divided by the word's character count.
    pub fn char_width(&self) -> f64 {
        self.frame.bbox.width / self.text.chars().count() as f64
    }
}

/// The four pairwise features: box distance, height-ratio excess, sine of
/// the axis angle difference and capitalization mismatch.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureVector {
    pub d: f64,
    pub h: f64,
    pub a: f64,
    pub c: f64,
}

impl FeatureVector {
    pub fn to_array(self) -> Vec4 {
        [self.d, self.h, self.a, self.c]
    }
}

/// True when the word has at least one cased character and all of its
/// cased characters are uppercase.
pub fn is_all_caps(text: &str) -> bool {
    let mut cased = false;
    for ch in text.chars() {
        if ch.is_lowercase() {
            return false;
        }
        if ch.is_uppercase() {
            cased = true;
        }
    }
    cased
}

fn height_ratio_excess(hi: f64, hj: f64) -> f64 {
    let (lo, hi) = (hi.min(hj), hi.max(hj));
    if hi == 0.0 {
        0.0
    } else if lo == 0.0 {
        LARGE_RATIO
    } else {
        hi / lo - 1.0
    }
}

pub fn feature_vector(li: &TextLabel, lj: &TextLabel) -> FeatureVector {
    let (bi, bj) = (li.bbox(), lj.bbox());
    FeatureVector {
        d: frame_distance(&li.frame, &lj.frame),
        h: height_ratio_excess(bi.height, bj.height),
        a: libm::sin(axis_angle_diff(bi, bj).to_radians()),
        c: if li.all_caps != lj.all_caps {
            1.0
        } else {
            0.0
        },
    }
}

/// Product cost: distance scaled by one plus each discrepancy.
pub fn edge_cost(li: &TextLabel, lj: &TextLabel) -> f64 {
    let f = feature_vector(li, lj);
    f.d * (1.0 + f.h) * (1.0 + f.a) * (1.0 + f.c)
}

/// A symmetric positive semi-definite 4×4 matrix over `(d, h, a, c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricMatrix {
    entries: Mat4,
}

impl MetricMatrix {
    pub const SYMMETRY_TOL: f64 = 1e-9;
    pub const PSD_TOL: f64 = 1e-9;

    pub fn new(entries: Mat4) -> Result<Self> {
        if entries.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::input("metric matrix has non-finite entries"));
        }
        let asym = linalg::max_asymmetry(&entries);
        if asym > Self::SYMMETRY_TOL {
            return Err(Error::input(alloc::format!(
                "metric matrix is not symmetric (max |m_ij - m_ji| = {asym:e})"
            )));
        }
        let min_eig = linalg::min_eigenvalue(&entries);
        if min_eig < -Self::PSD_TOL {
            return Err(Error::input(alloc::format!(
                "metric matrix is not positive semi-definite (min eigenvalue {min_eig:e})"
            )));
        }
        Ok(Self {
            entries: linalg::symmetrize(&entries),
        })
    }

    pub(crate) fn from_trusted(entries: Mat4) -> Self {
        Self {
            entries: linalg::symmetrize(&entries),
        }
    }

    pub fn identity() -> Self {
        Self {
            entries: linalg::IDENTITY,
        }
    }

    pub fn zeros() -> Self {
        Self {
            entries: linalg::ZERO,
        }
    }

    pub fn entries(&self) -> &Mat4 {
        &self.entries
    }

    pub fn quadratic_form(&self, v: &FeatureVector) -> f64 {
        linalg::quadratic_form(&self.entries, &v.to_array())
    }
}

/// `sqrt(vᵀ M v)` over the pair's feature vector.
pub fn mahalanobis_cost(li: &TextLabel, lj: &TextLabel, m: &MetricMatrix) -> Result<f64> {
    let radicand = m.quadratic_form(&feature_vector(li, lj));
    if radicand < -MetricMatrix::PSD_TOL {
        return Err(Error::InvalidMetric { radicand });
    }
    Ok(libm::sqrt(radicand.max(0.0)))
}

/// A pairwise edge cost for linkage-graph construction.
pub trait EdgeCost {
    fn cost(&self, a: &TextLabel, b: &TextLabel) -> Result<f64>;

    /// A value never above `cost(a, b)`, cheap enough to skip hopeless
    /// pairs during tree construction.
    fn lower_bound(&self, _a: &TextLabel, _b: &TextLabel) -> f64 {
        0.0
    }
}

/// The product cost of [`edge_cost`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ProductCost;

impl EdgeCost for ProductCost {
    fn cost(&self, a: &TextLabel, b: &TextLabel) -> Result<f64> {
        Ok(edge_cost(a, b))
    }

    /// The product is at least the box distance, which is at least the
    /// center distance minus both half-diagonals. Shrunk slightly so that
    /// rounding can never push it above the computed cost.
    fn lower_bound(&self, a: &TextLabel, b: &TextLabel) -> f64 {
        let gap = (a.bbox().center - b.bbox().center).norm() - a.frame.radius - b.frame.radius;
        gap * (1.0 - 1e-9) - 1e-9
    }
}

impl EdgeCost for MetricMatrix {
    fn cost(&self, a: &TextLabel, b: &TextLabel) -> Result<f64> {
        mahalanobis_cost(a, b, self)
    }
}

impl<F> EdgeCost for F
where
    F: Fn(&TextLabel, &TextLabel) -> f64,
{
    fn cost(&self, a: &TextLabel, b: &TextLabel) -> Result<f64> {
        Ok(self(a, b))
    }
}
