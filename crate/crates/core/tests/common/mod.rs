#![allow(dead_code)]

use hourglass::alternative::{Branch, HourglassOutcome, Verdict};
use hourglass::{ExplicitSet, IruSet, Matrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Closed-form spectral radius of a non-negative 2x2 matrix; its
/// eigenvalues are real since the discriminant is `(a − d)² + 4bc >= 0`.
pub fn rho_2x2(m: &Matrix) -> f64 {
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let half_tr = 0.5 * (a + d);
    let disc = (0.25 * (a - d) * (a - d) + b * c).max(0.0);
    half_tr + disc.sqrt()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Positive IRU set with `n` positions, `1..=max_rows` rows each, entries in `[lo, hi]`.
pub fn positive_iru(rng: &mut ChaCha8Rng, n: usize, max_rows: usize, lo: f64, hi: f64) -> IruSet {
    let sets = (0..n)
        .map(|_| {
            let k = rng.random_range(1..=max_rows);
            (0..k)
                .map(|_| (0..n).map(|_| rng.random_range(lo..=hi)).collect())
                .collect()
        })
        .collect();
    IruSet::from_rows(sets).unwrap()
}

pub fn nonneg_matrix(rng: &mut ChaCha8Rng, n: usize, zero_prob: f64) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if !rng.random_bool(zero_prob) {
                m.set(i, j, rng.random_range(0.0..=3.0));
            }
        }
    }
    m
}

pub fn nonneg_set(rng: &mut ChaCha8Rng, n: usize, count: usize, zero_prob: f64) -> ExplicitSet {
    ExplicitSet::new(
        (0..count)
            .map(|_| nonneg_matrix(rng, n, zero_prob))
            .collect(),
    )
    .unwrap()
}

pub fn example_a() -> ExplicitSet {
    ExplicitSet::new(vec![
        Matrix::from_rows(&[[0.0, 2.0], [0.0, 0.0]]).unwrap(),
        Matrix::from_rows(&[[0.0, 0.0], [2.0, 0.0]]).unwrap(),
    ])
    .unwrap()
}

pub fn example_b() -> ExplicitSet {
    ExplicitSet::new(vec![
        Matrix::from_rows(&[[2.0, 0.0], [0.0, 0.0]]).unwrap(),
        Matrix::from_rows(&[[0.0, 0.0], [0.0, 2.0]]).unwrap(),
    ])
    .unwrap()
}

/// Entry: zero with probability about 1/4, otherwise in `[0, 5]`.
pub fn entry() -> impl Strategy<Value = f64> {
    prop_oneof![1 => Just(0.0), 3 => 0.0..5.0f64]
}

pub fn square_matrix(max_n: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(entry(), n * n)
            .prop_map(move |data| Matrix::new(n, n, data).unwrap())
    })
}

pub fn positive_matrix(n: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(0.05..3.0f64, n * n).prop_map(move |d| Matrix::new(n, n, d).unwrap())
}

/// Positive IRU set of dimension `n` with 1..=3 rows per position.
pub fn positive_iru_strategy(n: usize) -> impl Strategy<Value = IruSet> {
    let row = proptest::collection::vec(0.1..2.0f64, n);
    let row_set = proptest::collection::vec(row, 1..=3);
    proptest::collection::vec(row_set, n).prop_map(|s| IruSet::from_rows(s).unwrap())
}

/// Checks the contract of an outcome directly against `s`.
pub fn contract_holds(s: &ExplicitSet, tilde: &Matrix, u: &[f64], out: &HourglassOutcome) -> bool {
    let v = tilde.mul_vec(u).unwrap();
    let sign = if out.branch == Branch::H1 { 1.0 } else { -1.0 };
    let tol = out.strict_tol;
    match out.verdict {
        Verdict::AllOnSide => s.iter().all(|a| {
            let w = a.mul_vec(u).unwrap();
            w.iter().zip(&v).all(|(x, y)| sign * (x - y) >= -tol)
        }),
        Verdict::Witness => {
            let bar = out.witness_matrix.as_ref().unwrap();
            let w = bar.mul_vec(u).unwrap();
            let slack: Vec<f64> = w.iter().zip(&v).map(|(x, y)| sign * (y - x)).collect();
            s.position_of(bar, 1e-12).is_some()
                && slack
                    .iter()
                    .zip(&out.slack)
                    .all(|(a, b)| (a - b).abs() < 1e-12)
                && slack.iter().all(|&d| d >= -tol)
                && slack.iter().any(|&d| d > tol)
        }
        Verdict::Violated => false,
    }
}
