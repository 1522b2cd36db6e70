#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;

use maplink_core::synth::{chain_map, random_labels};
use maplink_core::{
    extract_pairs, feature_vector, learn_metric, mahalanobis_cost, project_psd, Error, FeatureVector,
    LearnOptions, MetricMatrix, PairDataset,
};
use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_na(m: &[[f64; 4]; 4]) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| m[i][j])
}

fn random_symmetric(rng: &mut ChaCha8Rng) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let v = rng.gen_range(-5.0..5.0);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

fn random_psd(rng: &mut ChaCha8Rng) -> MetricMatrix {
    let a = to_na(&random_symmetric(rng));
    let p = a * a.transpose();
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = 0.5 * (p[(i, j)] + p[(j, i)]);
        }
    }
    MetricMatrix::new(m).unwrap()
}

#[test]
fn projection_matches_nalgebra_eigendecomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..500 {
        let s = random_symmetric(&mut rng);
        let eig = SymmetricEigen::new(to_na(&s));
        let clipped = eig.eigenvalues.map(|v| v.max(0.0));
        let expected = eig.eigenvectors * Matrix4::from_diagonal(&clipped) * eig.eigenvectors.transpose();
        let got = project_psd(&s).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((got.entries()[i][j] - expected[(i, j)]).abs() < 1e-9);
            }
        }
        let min = SymmetricEigen::new(to_na(got.entries())).eigenvalues.min();
        assert!(min >= -1e-9);
    }
}

#[test]
fn mahalanobis_matches_explicit_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let labels = random_labels(&mut rng, 60, 500.0);
    for _ in 0..1000 {
        let m = random_psd(&mut rng);
        let (i, j) = (rng.gen_range(0..60), rng.gen_range(0..60));
        let v = feature_vector(&labels[i], &labels[j]);
        let x = Vector4::new(v.d, v.h, v.a, v.c);
        let expected = (x.transpose() * to_na(m.entries()) * x)[(0, 0)].max(0.0).sqrt();
        let got = mahalanobis_cost(&labels[i], &labels[j], &m).unwrap();
        assert!((got - expected).abs() <= 1e-9 * expected.max(1.0));
    }
}

#[test]
fn metric_rejects_indefinite_matrix() {
    let mut m = [[0.0; 4]; 4];
    m[0][0] = -1.0;
    assert!(MetricMatrix::new(m).is_err());
    m[0][0] = 1.0;
    m[0][1] = 0.5;
    assert!(MetricMatrix::new(m).is_err());
}

#[test]
fn scalar_reducible_dataset_has_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let pos: Vec<f64> = (0..30).map(|_| rng.gen_range(0.0..0.5)).collect();
    let neg: Vec<f64> = (0..30).map(|_| rng.gen_range(1.0..4.0)).collect();
    let scalar = |t: &f64| FeatureVector { d: *t, h: 0.0, a: 0.0, c: 0.0 };
    let data = PairDataset {
        positives: pos.iter().map(scalar).collect(),
        negatives: neg.iter().map(scalar).collect(),
    };
    let r = learn_metric(&data, LearnOptions::default()).unwrap();
    let sp: f64 = pos.iter().map(|t| t * t).sum();
    let sn: f64 = neg.iter().map(|t| t * t).sum();
    assert!((r.matrix.entries()[0][0] - 1.0 / sn).abs() * sn < 1e-3);
    assert!((r.objective_trace.last().unwrap() - sp / sn).abs() < 1e-9);
    assert!((r.constraint_value - 1.0).abs() <= 1e-6);
    assert!(r.objective_trace.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn learning_is_reproducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let map = chain_map(&mut rng, "m", 150, Default::default());
    let data = extract_pairs(&map.view(), 5).unwrap();
    let a = learn_metric(&data, LearnOptions::default()).unwrap();
    let b = learn_metric(&data, LearnOptions::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn separable_pairs_rank_correctly() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let data = PairDataset {
        positives: (0..40)
            .map(|_| FeatureVector {
                d: rng.gen_range(0.0..5.0),
                h: rng.gen_range(0.0..0.05),
                a: rng.gen_range(0.0..2.0),
                c: 0.0,
            })
            .collect(),
        negatives: (0..40)
            .map(|_| FeatureVector {
                d: rng.gen_range(0.0..5.0),
                h: rng.gen_range(0.0..0.05),
                a: rng.gen_range(0.0..2.0),
                c: 1.0,
            })
            .collect(),
    };
    let r = learn_metric(&data, LearnOptions::default()).unwrap();
    let worst_pos = data.positives.iter().map(|v| r.matrix.quadratic_form(v)).fold(0.0, f64::max);
    let best_neg = data.negatives.iter().map(|v| r.matrix.quadratic_form(v)).fold(f64::INFINITY, f64::min);
    assert!(worst_pos < best_neg);
}

#[test]
fn extract_pairs_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    for _ in 0..10 {
        let map = chain_map(&mut rng, "m", 40, Default::default());
        let k = 5;
        let data = extract_pairs(&map.view(), k).unwrap();
        let adjacent: BTreeSet<(u64, u64)> = map
            .phrases
            .iter()
            .flat_map(|p| p.label_ids.windows(2).map(|w| (w[0].0.min(w[1].0), w[0].0.max(w[1].0))))
            .collect();
        let mut negatives = BTreeSet::new();
        for a in &map.labels {
            let mut others: Vec<(f64, u64)> = map
                .labels
                .iter()
                .filter(|b| b.id() != a.id())
                .filter(|b| !adjacent.contains(&(a.id().0.min(b.id().0), a.id().0.max(b.id().0))))
                .map(|b| (maplink_core::box_min_distance(a.bbox(), b.bbox()), b.id().0))
                .collect();
            others.sort_by(|x, y| x.partial_cmp(y).unwrap());
            for &(_, b) in others.iter().take(k) {
                negatives.insert((a.id().0.min(b), a.id().0.max(b)));
            }
        }
        assert_eq!(data.positives.len(), adjacent.len());
        assert_eq!(data.negatives.len(), negatives.len());
        assert!(data.negatives.len() <= map.labels.len() * k);
    }
}

#[test]
fn learning_rejects_empty_negatives() {
    let data = PairDataset {
        positives: vec![FeatureVector { d: 1.0, h: 0.0, a: 0.0, c: 0.0 }],
        negatives: vec![],
    };
    assert!(matches!(learn_metric(&data, LearnOptions::default()), Err(Error::InvalidInput(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn learned_metric_invariants(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gen = |rng: &mut ChaCha8Rng, n: usize| -> Vec<FeatureVector> {
            (0..n).map(|_| FeatureVector {
                d: rng.gen_range(0.0..50.0),
                h: rng.gen_range(0.0..3.0),
                a: rng.gen_range(0.0..90.0),
                c: f64::from(rng.gen_range(0..2u8)),
            }).collect()
        };
        let data = PairDataset { positives: gen(&mut rng, 20), negatives: gen(&mut rng, 20) };
        let r = learn_metric(&data, LearnOptions::default()).unwrap();
        let min = SymmetricEigen::new(to_na(r.matrix.entries())).eigenvalues.min();
        prop_assert!(min >= -1e-9);
        prop_assert!((r.constraint_value - 1.0).abs() <= 1e-6);
        prop_assert!(r.objective_trace.windows(2).all(|w| w[1] <= w[0]));
    }
}
