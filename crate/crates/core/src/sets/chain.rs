use serde::{Deserialize, Serialize};

use super::explicit::{check_scale, ExplicitSet};
use super::iru::check_epsilon;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Finite linearly ordered family `0 <= A₁ <= A₂ <= … <= Aₙ` (entrywise).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Matrix>", into = "Vec<Matrix>")]
pub struct OrderedChain {
    matrices: Vec<Matrix>,
}

impl TryFrom<Vec<Matrix>> for OrderedChain {
    type Error = Error;

    fn try_from(v: Vec<Matrix>) -> Result<Self> {
        OrderedChain::new(v)
    }
}

impl From<OrderedChain> for Vec<Matrix> {
    fn from(c: OrderedChain) -> Self {
        c.matrices
    }
}

/// Checks that `matrices` is a non-empty, equally sized, non-negative and
/// entrywise non-decreasing sequence.
pub fn chain_validate(matrices: &[Matrix]) -> Result<()> {
    let first = matrices.first().ok_or(Error::EmptySet)?;
    for (k, m) in matrices.iter().enumerate() {
        if m.shape() != first.shape() {
            return Err(Error::DimensionMismatch(format!(
                "chain member {k} is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                first.rows(),
                first.cols()
            )));
        }
        m.require_nonnegative()?;
    }
    for (k, pair) in matrices.windows(2).enumerate() {
        if pair[0]
            .data()
            .iter()
            .zip(pair[1].data())
            .any(|(a, b)| a > b)
        {
            return Err(Error::ChainOrder {
                index: k,
                next: k + 1,
            });
        }
    }
    Ok(())
}

impl OrderedChain {
    pub fn new(matrices: Vec<Matrix>) -> Result<Self> {
        chain_validate(&matrices)?;
        Ok(Self { matrices })
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.matrices[0].shape()
    }

    pub fn is_positive(&self) -> bool {
        self.matrices.iter().all(Matrix::is_positive)
    }

    /// Every consecutive pair is strictly ordered in every entry.
    pub fn is_strictly_ordered(&self) -> bool {
        self.matrices
            .windows(2)
            .all(|p| p[0].data().iter().zip(p[1].data()).all(|(a, b)| a < b))
    }

    /// `A_k + k·ε·𝟏` for the `k`-th member (1-based).
    pub fn epsilon_lift(&self, eps: f64) -> Result<Self> {
        check_epsilon(eps)?;
        let matrices = self
            .matrices
            .iter()
            .enumerate()
            .map(|(k, m)| m.add_scalar((k + 1) as f64 * eps))
            .collect();
        Self::new(matrices)
    }

    pub fn scale(&self, t: f64) -> Result<Self> {
        check_scale(t)?;
        Self::new(self.matrices.iter().map(|m| m.scale(t)).collect())
    }

    pub fn to_explicit(&self) -> ExplicitSet {
        ExplicitSet::new(self.matrices.clone()).expect("chain members share a shape")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(x: f64) -> Matrix {
        Matrix::filled(2, 2, x)
    }

    #[test]
    fn rejects_unordered() {
        assert!(matches!(
            OrderedChain::new(vec![m(1.0), m(0.5)]),
            Err(Error::ChainOrder { index: 0, next: 1 })
        ));
        assert!(OrderedChain::new(vec![]).is_err());
        assert!(OrderedChain::new(vec![m(-1.0)]).is_err());
    }

    #[test]
    fn lift_separates_equal_members() {
        let c = OrderedChain::new(vec![m(0.0), m(0.0), m(1.0)]).unwrap();
        assert!(!c.is_strictly_ordered());
        assert_eq!(c.to_explicit().len(), 2);
        let l = c.epsilon_lift(1e-3).unwrap();
        assert!(l.is_strictly_ordered());
        assert!(l.is_positive());
        assert_eq!(l.matrices()[2], m(1.003));
        assert_eq!(l.to_explicit().len(), 3);
    }
}
