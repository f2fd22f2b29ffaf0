use serde::{Deserialize, Serialize};

use super::explicit::{check_scale, default_dedup_tol, ExplicitSet};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Finite non-empty set of admissible rows for one row position.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct RowSet {
    dim: usize,
    rows: Vec<Vec<f64>>,
}

impl TryFrom<Vec<Vec<f64>>> for RowSet {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        RowSet::new(rows)
    }
}

impl From<RowSet> for Vec<Vec<f64>> {
    fn from(r: RowSet) -> Self {
        r.rows
    }
}

impl RowSet {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().ok_or(Error::EmptySet)?.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("rows must be non-empty".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {dim}",
                    r.len()
                )));
            }
            if let Some(p) = r.iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFinite(p));
            }
        }
        let max_abs = rows.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()));
        let tol = default_dedup_tol(max_abs);
        let mut kept: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
        for r in rows {
            let dup = kept
                .iter()
                .any(|k| k.iter().zip(&r).all(|(a, b)| (a - b).abs() <= tol));
            if !dup {
                kept.push(r);
            }
        }
        Ok(Self { dim, rows: kept })
    }

    pub fn singleton(row: Vec<f64>) -> Result<Self> {
        Self::new(vec![row])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.rows[k]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.rows.iter().flatten().all(|&x| x >= 0.0)
    }

    pub fn is_positive(&self) -> bool {
        self.rows.iter().flatten().all(|&x| x > 0.0)
    }

    fn map_rows(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        Self::new(self.rows.iter().map(|r| f(r)).collect())
    }

    /// Index of a row within `tol` (max-entry distance) of `row`.
    pub fn position_of(&self, row: &[f64], tol: f64) -> Option<usize> {
        self.rows.iter().position(|r| {
            r.len() == row.len() && r.iter().zip(row).all(|(a, b)| (a - b).abs() <= tol)
        })
    }
}

/// Independent row uncertainty set: every matrix whose `i`-th row is taken
/// from the `i`-th row set, independently across rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<RowSet>", into = "Vec<RowSet>")]
pub struct IruSet {
    cols: usize,
    row_sets: Vec<RowSet>,
}

impl TryFrom<Vec<RowSet>> for IruSet {
    type Error = Error;

    fn try_from(v: Vec<RowSet>) -> Result<Self> {
        IruSet::new(v)
    }
}

impl From<IruSet> for Vec<RowSet> {
    fn from(s: IruSet) -> Self {
        s.row_sets
    }
}

impl IruSet {
    pub fn new(row_sets: Vec<RowSet>) -> Result<Self> {
        let cols = row_sets.first().ok_or(Error::EmptySet)?.dim();
        if let Some(i) = row_sets.iter().position(|r| r.dim() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row set {i} has rows of length {}, expected {cols}",
                row_sets[i].dim()
            )));
        }
        Ok(Self { cols, row_sets })
    }

    /// Convenience constructor from plain nested vectors.
    pub fn from_rows(row_sets: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        Self::new(
            row_sets
                .into_iter()
                .map(RowSet::new)
                .collect::<Result<_>>()?,
        )
    }

    /// The IRU set consisting of one matrix.
    pub fn singleton(m: &Matrix) -> Self {
        let row_sets = m
            .to_rows()
            .into_iter()
            .map(|r| RowSet {
                dim: m.cols(),
                rows: vec![r],
            })
            .collect();
        Self {
            cols: m.cols(),
            row_sets,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.row_sets.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows(), self.cols)
    }

    pub fn row_sets(&self) -> &[RowSet] {
        &self.row_sets
    }

    pub fn row_set(&self, i: usize) -> &RowSet {
        &self.row_sets[i]
    }

    /// Number of matrices, `∏ |𝒜ᵢ|` (saturating).
    pub fn cardinality(&self) -> u128 {
        self.row_sets
            .iter()
            .fold(1u128, |acc, r| acc.saturating_mul(r.len() as u128))
    }

    pub fn is_positive(&self) -> bool {
        self.row_sets.iter().all(RowSet::is_positive)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.row_sets.iter().all(RowSet::is_nonnegative)
    }

    pub fn check_choice(&self, choice: &[usize]) -> Result<()> {
        if choice.len() != self.n_rows() {
            return Err(Error::IndexOutOfRange(format!(
                "row choice has {} entries for {} row sets",
                choice.len(),
                self.n_rows()
            )));
        }
        for (i, (&c, r)) in choice.iter().zip(&self.row_sets).enumerate() {
            if c >= r.len() {
                return Err(Error::IndexOutOfRange(format!(
                    "row {c} requested from row set {i} of size {}",
                    r.len()
                )));
            }
        }
        Ok(())
    }

    /// The member selecting row `choice[i]` from the `i`-th row set.
    pub fn matrix(&self, choice: &[usize]) -> Result<Matrix> {
        self.check_choice(choice)?;
        Ok(self.matrix_unchecked(choice))
    }

    pub(crate) fn matrix_unchecked(&self, choice: &[usize]) -> Matrix {
        let rows: Vec<&[f64]> = choice
            .iter()
            .zip(&self.row_sets)
            .map(|(&c, r)| r.row(c))
            .collect();
        Matrix::from_row_slices(self.cols, &rows)
    }

    /// Row choice of a member, if `m` belongs to the set up to `tol`.
    pub fn choice_of(&self, m: &Matrix, tol: f64) -> Option<Vec<usize>> {
        if m.shape() != self.shape() {
            return None;
        }
        self.row_sets
            .iter()
            .enumerate()
            .map(|(i, r)| r.position_of(m.row(i), tol))
            .collect()
    }

    /// All row choices in lexicographic order (first row most significant).
    pub fn choices(&self) -> ChoiceIter<'_> {
        ChoiceIter {
            sizes: self.row_sets.iter().map(RowSet::len).collect(),
            next: Some(vec![0; self.n_rows()]),
            _set: std::marker::PhantomData,
        }
    }

    /// Materializes the Cartesian-product family.
    pub fn enumerate(&self, size_guard: u128) -> Result<ExplicitSet> {
        let card = self.cardinality();
        if card > size_guard {
            return Err(Error::GuardExceeded {
                required: card,
                guard: size_guard,
            });
        }
        let mats = self.choices().map(|c| self.matrix_unchecked(&c)).collect();
        Ok(ExplicitSet::from_distinct(mats))
    }

    pub fn scale(&self, t: f64) -> Result<Self> {
        check_scale(t)?;
        self.map_row_sets(|r| r.map_rows(|row| row.iter().map(|x| x * t).collect()))
    }

    /// `𝒜 + ε𝟏`: every admissible row gets `ε` added to each entry.
    pub fn epsilon_lift(&self, eps: f64) -> Result<Self> {
        check_epsilon(eps)?;
        if !self.is_nonnegative() {
            return Err(Error::InvalidArgument(
                "epsilon lift expects a non-negative set".into(),
            ));
        }
        self.map_row_sets(|r| r.map_rows(|row| row.iter().map(|x| x + eps).collect()))
    }

    fn map_row_sets(&self, f: impl Fn(&RowSet) -> Result<RowSet>) -> Result<Self> {
        Self::new(self.row_sets.iter().map(f).collect::<Result<_>>()?)
    }

    /// Transposed family, an independent column uncertainty set.
    pub fn transpose(&self) -> ColumnUncertaintySet {
        ColumnUncertaintySet {
            transposed: self.clone(),
        }
    }
}

pub(crate) fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {eps}"
        )))
    }
}

pub struct ChoiceIter<'a> {
    sizes: Vec<usize>,
    next: Option<Vec<usize>>,
    _set: std::marker::PhantomData<&'a IruSet>,
}

impl Iterator for ChoiceIter<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = succ.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < self.sizes[pos] {
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(current)
    }
}

/// Row-wise Minkowski sum of two IRU sets; row independence commutes with
/// addition, so the result is again an IRU set.
pub fn iru_minkowski_sum(a: &IruSet, b: &IruSet) -> Result<IruSet> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "IRU sum of {:?} and {:?} sets",
            a.shape(),
            b.shape()
        )));
    }
    let row_sets = a
        .row_sets
        .iter()
        .zip(&b.row_sets)
        .map(|(ra, rb)| {
            let mut rows = Vec::with_capacity(ra.len() * rb.len());
            for x in ra.rows() {
                for y in rb.rows() {
                    rows.push(x.iter().zip(y).map(|(p, q)| p + q).collect());
                }
            }
            RowSet::new(rows)
        })
        .collect::<Result<_>>()?;
    IruSet::new(row_sets)
}

/// Independent column uncertainty set, stored through its transpose.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnUncertaintySet {
    transposed: IruSet,
}

impl ColumnUncertaintySet {
    /// Column sets are the row sets of the transposed family.
    pub fn column_sets(&self) -> &[RowSet] {
        self.transposed.row_sets()
    }

    pub fn shape(&self) -> (usize, usize) {
        let (r, c) = self.transposed.shape();
        (c, r)
    }

    pub fn enumerate(&self, size_guard: u128) -> Result<ExplicitSet> {
        Ok(self.transposed.enumerate(size_guard)?.transpose())
    }

    pub fn transpose(&self) -> IruSet {
        self.transposed.clone()
    }
}
