//! Metric implementations checked against independent straight-from-the-
//! definition oracles on randomized inputs, plus the algebraic invariants
//! the metrics must satisfy.

use std::collections::BTreeMap;

use facet_core::{cosine, mse, normalize_counts, pearson, project_to_schema};
use facet_core::{FacetSchema, FacetVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod oracle {
    //! Textbook formulas, written independently of the crate under test.

    pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len() as f64;
        let mean_a: f64 = a.iter().sum::<f64>() / n;
        let mean_b: f64 = b.iter().sum::<f64>() / n;
        let num: f64 = a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - mean_a) * (y - mean_b))
            .sum();
        let da: f64 = a.iter().map(|x| (x - mean_a).powi(2)).sum();
        let db: f64 = b.iter().map(|y| (y - mean_b).powi(2)).sum();
        num / (da.sqrt() * db.sqrt())
    }

    pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
        let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nb: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
        dot / (na * nb)
    }

    pub fn mse(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64
    }

    pub fn divide_by_sum(counts: &[u64]) -> Vec<f64> {
        let total: u64 = counts.iter().sum();
        counts.iter().map(|&c| c as f64 / total as f64).collect()
    }
}

fn random_vec(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-10.0..10.0)).collect()
}

#[test]
fn metrics_match_oracles_on_randomized_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for _ in 0..1000 {
        let len = rng.gen_range(2..64);
        let a = random_vec(&mut rng, len);
        let b = random_vec(&mut rng, len);
        let r = pearson(&a, &b).unwrap();
        assert!((r - oracle::pearson(&a, &b)).abs() < 1e-9);
        let c = cosine(&a, &b).unwrap();
        assert!((c - oracle::cosine(&a, &b)).abs() < 1e-9);
        let m = mse(&a, &b).unwrap();
        assert!((m - oracle::mse(&a, &b)).abs() < 1e-12);
    }
}

#[test]
fn normalize_counts_matches_divide_by_sum_oracle() {
    let schema = FacetSchema::canonical_12();
    let names: Vec<&String> = schema.facets().iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for _ in 0..1000 {
        let raw: Vec<u64> = (0..12).map(|_| rng.gen_range(0..500)).collect();
        if raw.iter().all(|&c| c == 0) {
            continue;
        }
        let counts: BTreeMap<String, u64> = names
            .iter()
            .zip(&raw)
            .map(|(n, &c)| ((*n).clone(), c))
            .collect();
        let v: FacetVector = normalize_counts(&counts, &schema).unwrap();
        let expected = oracle::divide_by_sum(&raw);
        for (got, want) in v.values().iter().zip(&expected) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}

#[test]
fn mse_against_brute_force_on_distribution_pairs() {
    // A published-style importance column against random representations.
    let brazil = [
        0.3168, 0.0754, 0.0, 0.0754, 0.1078, 0.0129, 0.0323, 0.0302, 0.0237, 0.1831, 0.1164,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for _ in 0..100 {
        let raw: Vec<f64> = (0..11).map(|_| rng.gen_range(0.0..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let rep: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let got = mse(&brazil, &rep).unwrap();
        assert!((got - oracle::mse(&brazil, &rep)).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn pearson_is_symmetric(
        a in proptest::collection::vec(-100.0f64..100.0, 2..32),
        b in proptest::collection::vec(-100.0f64..100.0, 2..32),
    ) {
        let n = a.len().min(b.len());
        let (a, b) = (&a[..n], &b[..n]);
        if let (Ok(r1), Ok(r2)) = (pearson(a, b), pearson(b, a)) {
            prop_assert!((r1 - r2).abs() < 1e-12);
        }
    }

    #[test]
    fn pearson_affine_invariance(
        a in proptest::collection::vec(-100.0f64..100.0, 3..32),
        alpha in 0.01f64..50.0,
        beta in -100.0f64..100.0,
    ) {
        let b: Vec<f64> = a.iter().map(|x| alpha * x + beta).collect();
        if let Ok(r) = pearson(&a, &b) {
            prop_assert!((r - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn cosine_positive_scaling_invariance(
        a in proptest::collection::vec(0.01f64..100.0, 1..32),
        alpha in 0.01f64..50.0,
    ) {
        let b: Vec<f64> = a.iter().map(|x| alpha * x).collect();
        let s = cosine(&a, &b).unwrap();
        prop_assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_of_nonnegative_inputs_is_in_unit_interval(
        a in proptest::collection::vec(0.0f64..100.0, 1..32),
        b in proptest::collection::vec(0.0f64..100.0, 1..32),
    ) {
        let n = a.len().min(b.len());
        if let Ok(s) = cosine(&a[..n], &b[..n]) {
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&s));
        }
    }

    #[test]
    fn mse_zero_iff_equal(
        a in proptest::collection::vec(-100.0f64..100.0, 1..32),
    ) {
        prop_assert_eq!(mse(&a, &a).unwrap(), 0.0);
        let mut b = a.clone();
        b[0] += 1.0;
        prop_assert!(mse(&a, &b).unwrap() > 1e-12);
    }

    #[test]
    fn normalized_vectors_sum_to_one_and_are_nonnegative(
        raw in proptest::collection::vec(0u64..1000, 12..=12),
    ) {
        prop_assume!(raw.iter().any(|&c| c > 0));
        let schema = FacetSchema::canonical_12();
        let counts: BTreeMap<String, u64> = schema
            .facets()
            .iter()
            .zip(&raw)
            .map(|(n, &c)| (n.clone(), c))
            .collect();
        let v: FacetVector = normalize_counts(&counts, &schema).unwrap();
        let sum: f64 = v.values().iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-9);
        prop_assert!(v.values().iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn projection_is_idempotent_on_random_vectors(
        raw in proptest::collection::vec(1u64..1000, 12..=12),
    ) {
        let twelve = FacetSchema::canonical_12();
        let eleven = FacetSchema::canonical_11();
        let counts: BTreeMap<String, u64> = twelve
            .facets()
            .iter()
            .zip(&raw)
            .map(|(n, &c)| (n.clone(), c))
            .collect();
        let v: FacetVector = normalize_counts(&counts, &twelve).unwrap();
        let once = project_to_schema(&v, &twelve, &eleven).unwrap();
        let twice = project_to_schema(&once, &eleven, &eleven).unwrap();
        for (x, y) in once.values().iter().zip(twice.values()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}
