//! Learning the PSD matrix of the Mahalanobis baseline.
//!
//! Minimizes `Σ_pos vᵀMv` subject to `Σ_neg vᵀMv ≥ 1` and `M ⪰ 0`. The
//! objective is linear and homogeneous in `M`, so the constraint is tight
//! at the optimum; iterates are kept on `Σ_neg vᵀMv = 1` by rescaling, which
//! turns the problem into minimizing the ratio `tr(MP) / tr(MN)` with
//! `P = Σ_pos vvᵀ` and `N = Σ_neg vvᵀ`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::cost::{feature_vector, FeatureVector, LabelId, MetricMatrix, TextLabel};
use crate::error::{Error, Result};
use crate::eval::AnnotatedMap;
use crate::geometry::box_min_distance;
use crate::linalg::{self, Mat4};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PairDataset {
    /// Pairs adjacent in an annotated phrase.
    pub positives: Vec<FeatureVector>,
    /// Nearby pairs that are not adjacent in any phrase.
    pub negatives: Vec<FeatureVector>,
}

impl PairDataset {
    pub fn extend(&mut self, other: PairDataset) {
        self.positives.extend(other.positives);
        self.negatives.extend(other.negatives);
    }
}

fn pair_key(x: LabelId, y: LabelId) -> (LabelId, LabelId) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

/// Positive pairs are consecutive labels of every multiword phrase; negative
/// pairs join each label to its `negatives_per_label` nearest labels (by box
/// distance, ties by id) that are not phrase-adjacent to it.
pub fn extract_pairs(map: &AnnotatedMap<'_>, negatives_per_label: usize) -> Result<PairDataset> {
    let by_id: BTreeMap<LabelId, &TextLabel> = map.labels.iter().map(|l| (l.id(), l)).collect();
    let mut adjacent: BTreeSet<(LabelId, LabelId)> = BTreeSet::new();
    for phrase in map.phrases {
        for id in &phrase.label_ids {
            if !by_id.contains_key(id) {
                return Err(Error::UnknownLabel(id.0));
            }
        }
        for w in phrase.label_ids.windows(2) {
            adjacent.insert(pair_key(w[0], w[1]));
        }
    }

    let mut negatives: BTreeSet<(LabelId, LabelId)> = BTreeSet::new();
    let mut ranked: Vec<(f64, LabelId)> = Vec::with_capacity(map.labels.len());
    for li in map.labels {
        ranked.clear();
        ranked.extend(
            map.labels
                .iter()
                .filter(|lj| lj.id() != li.id() && !adjacent.contains(&pair_key(li.id(), lj.id())))
                .map(|lj| (box_min_distance(li.bbox(), lj.bbox()), lj.id())),
        );
        ranked.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        for &(_, other) in ranked.iter().take(negatives_per_label) {
            negatives.insert(pair_key(li.id(), other));
        }
    }

    let features = |keys: &BTreeSet<(LabelId, LabelId)>| -> Vec<FeatureVector> {
        keys.iter()
            .map(|(a, b)| feature_vector(by_id[a], by_id[b]))
            .collect()
    };
    Ok(PairDataset {
        positives: features(&adjacent),
        negatives: features(&negatives),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearnOptions {
    pub max_iters: usize,
    /// Relative objective change below which iteration stops.
    pub tol: f64,
}

impl Default for LearnOptions {
    fn default() -> Self {
        Self {
            max_iters: 1000,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnResult {
    pub matrix: MetricMatrix,
    /// Objective after initialization and after every accepted step.
    pub objective_trace: Vec<f64>,
    /// `Σ_neg vᵀMv` of the returned matrix.
    pub constraint_value: f64,
    pub iterations: usize,
}

fn scatter(vectors: &[FeatureVector]) -> Mat4 {
    vectors.iter().fold(linalg::ZERO, |acc, v| {
        linalg::add_scaled(&acc, &linalg::outer(&v.to_array()), 1.0)
    })
}

/// Projected gradient descent with backtracking on the rescaled ratio.
pub fn learn_metric(data: &PairDataset, options: LearnOptions) -> Result<LearnResult> {
    if data.positives.is_empty() || data.negatives.is_empty() {
        return Err(Error::input(
            "metric learning needs at least one positive and one negative pair",
        ));
    }
    let all_finite = |vs: &[FeatureVector]| vs.iter().all(|v| v.to_array().iter().all(|x| x.is_finite()));
    if !all_finite(&data.positives) || !all_finite(&data.negatives) {
        return Err(Error::input("feature vectors must be finite"));
    }
    let pos = scatter(&data.positives);
    let neg = scatter(&data.negatives);
    let neg_mass: f64 = (0..4).map(|i| neg[i][i]).sum();
    if neg_mass <= 0.0 {
        return Err(Error::InfeasibleConstraint);
    }

    let mut m = linalg::scale(&linalg::IDENTITY, 1.0 / neg_mass);
    let mut objective = linalg::inner(&m, &pos);
    let mut trace = alloc::vec![objective];
    let mut step = 1.0;
    let mut iterations = 0;

    while iterations < options.max_iters && objective > 0.0 {
        iterations += 1;
        // Gradient of tr(MP)/tr(MN) at tr(MN) = 1.
        let grad = linalg::add_scaled(&pos, &neg, -objective);
        let grad_norm = linalg::frobenius(&grad);
        if grad_norm == 0.0 {
            break;
        }
        let base = linalg::frobenius(&m) / grad_norm;

        let mut accepted = None;
        for _ in 0..80 {
            let candidate = clip_eigenvalues(&linalg::add_scaled(&m, &grad, -step * base));
            let constraint = linalg::inner(&candidate, &neg);
            if constraint > 0.0 {
                let candidate = linalg::scale(&candidate, 1.0 / constraint);
                let value = linalg::inner(&candidate, &pos);
                if value <= objective {
                    accepted = Some((candidate, value));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((next, value)) = accepted else {
            break;
        };
        let change = (objective - value) / objective;
        m = next;
        objective = value;
        trace.push(objective);
        step = (step * 2.0).min(1.0);
        if change < options.tol {
            break;
        }
    }

    let constraint = linalg::inner(&m, &neg);
    let m = linalg::scale(&m, 1.0 / constraint);
    let constraint_value = linalg::inner(&m, &neg);
    Ok(LearnResult {
        matrix: MetricMatrix::from_trusted(m),
        objective_trace: trace,
        constraint_value,
        iterations,
    })
}

fn clip_eigenvalues(s: &Mat4) -> Mat4 {
    let (mut values, vectors) = linalg::sym_eigen(s);
    let scale = linalg::frobenius(s);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min >= -1e-14 * scale {
        return linalg::symmetrize(s);
    }
    for v in values.iter_mut() {
        *v = v.max(0.0);
    }
    linalg::reconstruct(&values, &vectors)
}

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues are clipped
/// to zero. Already-PSD input comes back unchanged.
pub fn project_psd(s: &Mat4) -> Result<MetricMatrix> {
    if s.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::input("matrix has non-finite entries"));
    }
    let asym = linalg::max_asymmetry(s);
    if asym > MetricMatrix::SYMMETRY_TOL {
        return Err(Error::input(alloc::format!(
            "matrix is not symmetric (max |s_ij - s_ji| = {asym:e})"
        )));
    }
    Ok(MetricMatrix::from_trusted(clip_eigenvalues(s)))
}
