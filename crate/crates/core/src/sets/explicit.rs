use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Default duplicate tolerance for a collection whose largest entry
/// magnitude is `max_abs`.
pub fn default_dedup_tol(max_abs: f64) -> f64 {
    1e-12 * (1.0 + max_abs)
}

/// Finite, non-empty set of equally sized matrices with near-duplicates
/// (entrywise-max distance within the dedup tolerance) removed. Insertion
/// order of first occurrences is preserved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Matrix>", into = "Vec<Matrix>")]
pub struct ExplicitSet {
    rows: usize,
    cols: usize,
    matrices: Vec<Matrix>,
}

impl TryFrom<Vec<Matrix>> for ExplicitSet {
    type Error = Error;

    fn try_from(v: Vec<Matrix>) -> Result<Self> {
        ExplicitSet::new(v)
    }
}

impl From<ExplicitSet> for Vec<Matrix> {
    fn from(s: ExplicitSet) -> Self {
        s.matrices
    }
}

impl ExplicitSet {
    pub fn new(matrices: Vec<Matrix>) -> Result<Self> {
        let tol = default_dedup_tol(max_abs(&matrices));
        Self::with_tolerance(matrices, tol)
    }

    pub fn with_tolerance(matrices: Vec<Matrix>, dedup_tol: f64) -> Result<Self> {
        let (rows, cols) = check_shapes(&matrices)?;
        Ok(Self {
            rows,
            cols,
            matrices: dedup(matrices, dedup_tol),
        })
    }

    /// Wraps matrices already known to be pairwise distinct and equally sized.
    pub(crate) fn from_distinct(matrices: Vec<Matrix>) -> Self {
        let (rows, cols) = matrices[0].shape();
        Self {
            rows,
            cols,
            matrices,
        }
    }

    pub fn singleton(m: Matrix) -> Self {
        Self::from_distinct(vec![m])
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn get(&self, i: usize) -> Option<&Matrix> {
        self.matrices.get(i)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Matrix> {
        self.matrices.iter()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrices)
    }

    pub fn default_dedup_tol(&self) -> f64 {
        default_dedup_tol(self.max_abs())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_nonnegative(&self) -> bool {
        self.matrices.iter().all(Matrix::is_nonnegative)
    }

    pub fn is_positive(&self) -> bool {
        self.matrices.iter().all(Matrix::is_positive)
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Index of a member within `tol` of `m` under the entrywise-max distance.
    pub fn position_of(&self, m: &Matrix, tol: f64) -> Option<usize> {
        if m.shape() != self.shape() {
            return None;
        }
        self.matrices.iter().position(|x| x.max_abs_diff(m) <= tol)
    }

    /// Set equality up to `tol`: every member of each set has a partner in
    /// the other within `tol`.
    pub fn set_eq(&self, other: &Self, tol: f64) -> bool {
        self.shape() == other.shape()
            && hausdorff_distance(self, other, SetNorm::EntrywiseMax)
                .map(|h| h.distance <= tol)
                .unwrap_or(false)
    }

    /// Adjoins more matrices of the same shape, skipping near-duplicates.
    pub fn extended(&self, extra: impl IntoIterator<Item = Matrix>) -> Result<Self> {
        let mut all = self.matrices.clone();
        all.extend(extra);
        Self::new(all)
    }

    pub fn scale(&self, t: f64) -> Result<Self> {
        check_scale(t)?;
        Ok(Self::from_distinct(
            self.matrices.iter().map(|m| m.scale(t)).collect(),
        ))
    }

    pub fn transpose(&self) -> Self {
        Self::from_distinct(self.matrices.iter().map(Matrix::transpose).collect())
    }

    /// Entrywise minimum and maximum over the members.
    pub fn envelope(&self) -> (Matrix, Matrix) {
        let mut lo = self.matrices[0].clone();
        let mut hi = lo.clone();
        for m in &self.matrices[1..] {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    let x = m.get(i, j);
                    if x < lo.get(i, j) {
                        lo.set(i, j, x);
                    }
                    if x > hi.get(i, j) {
                        hi.set(i, j, x);
                    }
                }
            }
        }
        (lo, hi)
    }

    /// `Σ weights[j] · A_j` over all members; weights must be non-negative
    /// and sum to one.
    pub fn convex_combination(&self, weights: &[f64]) -> Result<Matrix> {
        if weights.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for a set of {} matrices",
                weights.len(),
                self.len()
            )));
        }
        if weights.iter().any(|&w| w.is_nan() || w < 0.0) {
            return Err(Error::InvalidArgument(
                "weights must be non-negative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "weights must sum to 1, got {total}"
            )));
        }
        let mut out = Matrix::zeros(self.rows, self.cols);
        for (m, &w) in self.matrices.iter().zip(weights) {
            out.axpy_in_place(w, m);
        }
        Ok(out)
    }
}

pub(crate) fn check_scale(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "scale factor must be positive, got {t}"
        )))
    }
}

fn check_shapes(matrices: &[Matrix]) -> Result<(usize, usize)> {
    let first = matrices.first().ok_or(Error::EmptySet)?;
    let shape = first.shape();
    for (i, m) in matrices.iter().enumerate() {
        if m.shape() != shape {
            return Err(Error::DimensionMismatch(format!(
                "member {i} is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                shape.0,
                shape.1
            )));
        }
    }
    Ok(shape)
}

fn max_abs(matrices: &[Matrix]) -> f64 {
    matrices.iter().map(Matrix::max_abs).fold(0.0, f64::max)
}

/// Removes later near-duplicates (entrywise-max distance `<= tol`) while
/// keeping the first occurrence of each.
///
/// Candidates are bucketed by a fixed linear projection of their entries;
/// matrices within `tol` of each other have projections within
/// `Σw · tol`, so only a narrow window of the sorted projections needs an
/// exact comparison.
pub(crate) fn dedup(matrices: Vec<Matrix>, tol: f64) -> Vec<Matrix> {
    if matrices.len() < 2 {
        return matrices;
    }
    let len = matrices[0].data().len();
    let weights: Vec<f64> = (0..len)
        .map(|k| ((k as f64 + 1.0) * 0.618_033_988_749_894_9).fract() + 0.5)
        .collect();
    let weight_sum: f64 = weights.iter().sum();
    let keys: Vec<f64> = matrices
        .iter()
        .map(|m| m.data().iter().zip(&weights).map(|(x, w)| x * w).sum())
        .collect();
    let mut order: Vec<usize> = (0..matrices.len()).collect();
    order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));
    let mut rank = vec![0; matrices.len()];
    for (pos, &i) in order.iter().enumerate() {
        rank[i] = pos;
    }

    let mut kept = vec![false; matrices.len()];
    for i in 0..matrices.len() {
        let window = weight_sum * tol + 1e-14 * (1.0 + keys[i].abs());
        let pos = rank[i];
        let is_dup = |j: usize| j < i && kept[j] && matrices[j].max_abs_diff(&matrices[i]) <= tol;
        let mut dup = false;
        for &j in order[..pos].iter().rev() {
            if keys[i] - keys[j] > window {
                break;
            }
            if is_dup(j) {
                dup = true;
                break;
            }
        }
        if !dup {
            for &j in &order[pos + 1..] {
                if keys[j] - keys[i] > window {
                    break;
                }
                if is_dup(j) {
                    dup = true;
                    break;
                }
            }
        }
        kept[i] = !dup;
    }
    matrices
        .into_iter()
        .zip(kept)
        .filter_map(|(m, k)| k.then_some(m))
        .collect()
}

/// Minkowski sum `{A + B : A ∈ a, B ∈ b}`.
pub fn minkowski_sum(a: &ExplicitSet, b: &ExplicitSet, dedup_tol: f64) -> Result<ExplicitSet> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "Minkowski sum of {:?} and {:?} sets",
            a.shape(),
            b.shape()
        )));
    }
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            let mut s = x.clone();
            s.axpy_in_place(1.0, y);
            out.push(s);
        }
    }
    Ok(ExplicitSet::from_distinct(dedup(out, dedup_tol)))
}

/// Minkowski product `{AB : A ∈ a, B ∈ b}`.
pub fn minkowski_product(a: &ExplicitSet, b: &ExplicitSet, dedup_tol: f64) -> Result<ExplicitSet> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "Minkowski product of {:?} and {:?} sets",
            a.shape(),
            b.shape()
        )));
    }
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            out.push(x.matmul_unchecked(y));
        }
    }
    Ok(ExplicitSet::from_distinct(dedup(out, dedup_tol)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetNorm {
    EntrywiseMax,
    L1Operator,
}

impl SetNorm {
    pub fn distance(self, a: &Matrix, b: &Matrix) -> f64 {
        match self {
            SetNorm::EntrywiseMax => a.max_abs_diff(b),
            SetNorm::L1Operator => a
                .sub(b)
                .map(|d| d.l1_operator_norm())
                .unwrap_or(f64::INFINITY),
        }
    }
}

/// Directed witness: the member attaining the supremum and its distance to
/// the nearest member of the other set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HausdorffWitness {
    pub index: usize,
    pub nearest_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HausdorffReport {
    pub distance: f64,
    pub witness_a_to_b: HausdorffWitness,
    pub witness_b_to_a: HausdorffWitness,
}

/// Exact Hausdorff distance between two finite sets.
pub fn hausdorff_distance(
    a: &ExplicitSet,
    b: &ExplicitSet,
    norm: SetNorm,
) -> Result<HausdorffReport> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "Hausdorff distance between {:?} and {:?} sets",
            a.shape(),
            b.shape()
        )));
    }
    let dist: Vec<Vec<f64>> = a
        .iter()
        .map(|x| b.iter().map(|y| norm.distance(x, y)).collect())
        .collect();
    let directed = |nearest: Vec<f64>| {
        nearest.into_iter().enumerate().fold(
            HausdorffWitness {
                index: 0,
                nearest_distance: f64::NEG_INFINITY,
            },
            |w, (i, d)| {
                if d > w.nearest_distance {
                    HausdorffWitness {
                        index: i,
                        nearest_distance: d,
                    }
                } else {
                    w
                }
            },
        )
    };
    let a_to_b = directed(
        dist.iter()
            .map(|row| row.iter().copied().fold(f64::INFINITY, f64::min))
            .collect(),
    );
    let b_to_a = directed(
        (0..b.len())
            .map(|j| dist.iter().map(|row| row[j]).fold(f64::INFINITY, f64::min))
            .collect(),
    );
    Ok(HausdorffReport {
        distance: a_to_b.nearest_distance.max(b_to_a.nearest_distance),
        witness_a_to_b: a_to_b,
        witness_b_to_a: b_to_a,
    })
}

/// Uniform weights on the `k`-simplex from sorted-uniform spacings.
pub fn simplex_weights<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    assert!(k >= 1);
    let mut cuts: Vec<f64> = (0..k - 1).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut weights = Vec::with_capacity(k);
    let mut prev = 0.0;
    for c in cuts {
        weights.push(c - prev);
        prev = c;
    }
    weights.push(1.0 - prev);
    weights
}

/// Random convex combination of `k` members drawn from `s` (distinct when
/// `k <= |s|`, with replacement otherwise).
pub fn convex_sample_with<R: Rng + ?Sized>(
    s: &ExplicitSet,
    k: usize,
    rng: &mut R,
) -> Result<Matrix> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let picks: Vec<usize> = if k <= s.len() {
        index::sample(rng, s.len(), k).into_vec()
    } else {
        (0..k).map(|_| rng.random_range(0..s.len())).collect()
    };
    let weights = simplex_weights(k, rng);
    let mut out = Matrix::zeros(s.rows, s.cols);
    for (&i, &w) in picks.iter().zip(&weights) {
        out.axpy_in_place(w, &s.matrices[i]);
    }
    Ok(out)
}

/// Seeded form of [`convex_sample_with`].
pub fn convex_sample(s: &ExplicitSet, k: usize, seed: u64) -> Result<Matrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    convex_sample_with(s, k, &mut rng)
}
