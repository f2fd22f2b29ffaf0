use super::chain::OrderedChain;
use super::explicit::{
    check_scale, default_dedup_tol, minkowski_product, minkowski_sum, ExplicitSet,
};
use super::iru::IruSet;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub const DEFAULT_SIZE_GUARD: u128 = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub enum SetLeaf {
    Iru(IruSet),
    Chain(OrderedChain),
    Explicit(ExplicitSet),
}

impl SetLeaf {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            SetLeaf::Iru(s) => s.shape(),
            SetLeaf::Chain(c) => c.shape(),
            SetLeaf::Explicit(e) => e.shape(),
        }
    }

    pub fn cardinality(&self) -> u128 {
        match self {
            SetLeaf::Iru(s) => s.cardinality(),
            SetLeaf::Chain(c) => c.len() as u128,
            SetLeaf::Explicit(e) => e.len() as u128,
        }
    }
}

/// Polynomial expression over matrix sets, evaluated with Minkowski
/// semantics: sums of products of scaled leaves.
#[derive(Clone, Debug, PartialEq)]
pub enum SetExpr {
    Leaf(SetLeaf),
    Sum(Vec<SetExpr>),
    /// Ordered factors, left to right.
    Product(Vec<SetExpr>),
    Scale(f64, Box<SetExpr>),
    Zero {
        rows: usize,
        cols: usize,
    },
    Identity(usize),
}

impl From<IruSet> for SetExpr {
    fn from(s: IruSet) -> Self {
        SetExpr::Leaf(SetLeaf::Iru(s))
    }
}

impl From<OrderedChain> for SetExpr {
    fn from(c: OrderedChain) -> Self {
        SetExpr::Leaf(SetLeaf::Chain(c))
    }
}

impl From<ExplicitSet> for SetExpr {
    fn from(e: ExplicitSet) -> Self {
        SetExpr::Leaf(SetLeaf::Explicit(e))
    }
}

impl SetExpr {
    pub fn sum(children: Vec<SetExpr>) -> Self {
        SetExpr::Sum(children)
    }

    pub fn product(children: Vec<SetExpr>) -> Self {
        SetExpr::Product(children)
    }

    pub fn scale(t: f64, child: SetExpr) -> Self {
        SetExpr::Scale(t, Box::new(child))
    }

    /// Shape of the denoted set; fails on inadmissible composition.
    pub fn shape(&self) -> Result<(usize, usize)> {
        match self {
            SetExpr::Leaf(l) => Ok(l.shape()),
            SetExpr::Zero { rows, cols } => {
                if *rows == 0 || *cols == 0 {
                    return Err(Error::InvalidArgument(
                        "zero element needs positive size".into(),
                    ));
                }
                Ok((*rows, *cols))
            }
            SetExpr::Identity(n) => {
                if *n == 0 {
                    return Err(Error::InvalidArgument(
                        "identity needs positive size".into(),
                    ));
                }
                Ok((*n, *n))
            }
            SetExpr::Scale(t, child) => {
                check_scale(*t)?;
                child.shape()
            }
            SetExpr::Sum(children) => {
                check_arity(children, "sum")?;
                let first = children[0].shape()?;
                for (k, c) in children.iter().enumerate().skip(1) {
                    let s = c.shape()?;
                    if s != first {
                        return Err(Error::DimensionMismatch(format!(
                            "sum term {k} is {}x{}, expected {}x{}",
                            s.0, s.1, first.0, first.1
                        )));
                    }
                }
                Ok(first)
            }
            SetExpr::Product(children) => {
                check_arity(children, "product")?;
                let mut shape = children[0].shape()?;
                for (k, c) in children.iter().enumerate().skip(1) {
                    let s = c.shape()?;
                    if s.0 != shape.1 {
                        return Err(Error::DimensionMismatch(format!(
                            "product factor {k} has {} rows, previous factors have {} columns",
                            s.0, shape.1
                        )));
                    }
                    shape = (shape.0, s.1);
                }
                Ok(shape)
            }
        }
    }

    /// Upper bound on the number of matrices the expression expands to
    /// (before deduplication), saturating.
    pub fn cardinality_bound(&self) -> u128 {
        match self {
            SetExpr::Leaf(l) => l.cardinality(),
            SetExpr::Zero { .. } | SetExpr::Identity(_) => 1,
            SetExpr::Scale(_, child) => child.cardinality_bound(),
            SetExpr::Sum(children) | SetExpr::Product(children) => children
                .iter()
                .fold(1u128, |acc, c| acc.saturating_mul(c.cardinality_bound())),
        }
    }

    /// Upper bound on the magnitude of any entry of the denoted set.
    fn magnitude_bound(&self) -> f64 {
        match self {
            SetExpr::Leaf(SetLeaf::Iru(s)) => s
                .row_sets()
                .iter()
                .flat_map(|r| r.rows().iter().flatten())
                .fold(0.0, |m: f64, x| m.max(x.abs())),
            SetExpr::Leaf(SetLeaf::Chain(c)) => {
                c.matrices().iter().map(Matrix::max_abs).fold(0.0, f64::max)
            }
            SetExpr::Leaf(SetLeaf::Explicit(e)) => e.max_abs(),
            SetExpr::Zero { .. } => 0.0,
            SetExpr::Identity(_) => 1.0,
            SetExpr::Scale(t, c) => t * c.magnitude_bound(),
            SetExpr::Sum(children) => children.iter().map(SetExpr::magnitude_bound).sum(),
            SetExpr::Product(children) => {
                let mut bound = children[0].magnitude_bound();
                let mut inner = children[0].shape().map(|s| s.1).unwrap_or(1);
                for c in &children[1..] {
                    bound *= c.magnitude_bound() * inner as f64;
                    inner = c.shape().map(|s| s.1).unwrap_or(1);
                }
                bound
            }
        }
    }

    /// Materializes the denoted set. `dedup_tol = None` uses the default
    /// relative tolerance at every intermediate step.
    pub fn expand(&self, size_guard: u128, dedup_tol: Option<f64>) -> Result<ExplicitSet> {
        self.shape()?;
        let required = self.cardinality_bound();
        if required > size_guard {
            return Err(Error::GuardExceeded {
                required,
                guard: size_guard,
            });
        }
        self.expand_inner(size_guard, dedup_tol)
    }

    fn expand_inner(&self, guard: u128, tol: Option<f64>) -> Result<ExplicitSet> {
        let tol_for = |e: &SetExpr| tol.unwrap_or_else(|| default_dedup_tol(e.magnitude_bound()));
        match self {
            SetExpr::Leaf(SetLeaf::Iru(s)) => s.enumerate(guard),
            SetExpr::Leaf(SetLeaf::Chain(c)) => Ok(c.to_explicit()),
            SetExpr::Leaf(SetLeaf::Explicit(e)) => Ok(e.clone()),
            SetExpr::Zero { rows, cols } => Ok(ExplicitSet::singleton(Matrix::zeros(*rows, *cols))),
            SetExpr::Identity(n) => Ok(ExplicitSet::singleton(Matrix::identity(*n))),
            SetExpr::Scale(t, child) => child.expand_inner(guard, tol)?.scale(*t),
            SetExpr::Sum(children) => {
                let mut acc = children[0].expand_inner(guard, tol)?;
                for c in &children[1..] {
                    let next = c.expand_inner(guard, tol)?;
                    acc = minkowski_sum(&acc, &next, tol_for(self))?;
                }
                Ok(acc)
            }
            SetExpr::Product(children) => {
                let mut acc = children[0].expand_inner(guard, tol)?;
                for c in &children[1..] {
                    let next = c.expand_inner(guard, tol)?;
                    acc = minkowski_product(&acc, &next, tol_for(self))?;
                }
                Ok(acc)
            }
        }
    }

    /// Replaces every IRU and chain leaf by its ε-lift. Explicit leaves and
    /// the zero/identity elements are left untouched.
    pub fn epsilon_lift_leaves(&self, eps: f64) -> Result<SetExpr> {
        Ok(match self {
            SetExpr::Leaf(SetLeaf::Iru(s)) => s.epsilon_lift(eps)?.into(),
            SetExpr::Leaf(SetLeaf::Chain(c)) => c.epsilon_lift(eps)?.into(),
            SetExpr::Leaf(SetLeaf::Explicit(_)) | SetExpr::Zero { .. } | SetExpr::Identity(_) => {
                self.clone()
            }
            SetExpr::Scale(t, c) => SetExpr::Scale(*t, Box::new(c.epsilon_lift_leaves(eps)?)),
            SetExpr::Sum(cs) => SetExpr::Sum(
                cs.iter()
                    .map(|c| c.epsilon_lift_leaves(eps))
                    .collect::<Result<_>>()?,
            ),
            SetExpr::Product(cs) => SetExpr::Product(
                cs.iter()
                    .map(|c| c.epsilon_lift_leaves(eps))
                    .collect::<Result<_>>()?,
            ),
        })
    }

    /// True when every leaf is an IRU set or an ordered chain, i.e. the
    /// expression is a polynomial in structured sets.
    pub fn has_structured_leaves(&self) -> bool {
        match self {
            SetExpr::Leaf(SetLeaf::Explicit(_)) => false,
            SetExpr::Leaf(_) | SetExpr::Zero { .. } | SetExpr::Identity(_) => true,
            SetExpr::Scale(_, c) => c.has_structured_leaves(),
            SetExpr::Sum(cs) | SetExpr::Product(cs) => {
                cs.iter().all(SetExpr::has_structured_leaves)
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            SetExpr::Leaf(_) | SetExpr::Zero { .. } | SetExpr::Identity(_) => 0,
            SetExpr::Scale(_, c) => 1 + c.depth(),
            SetExpr::Sum(cs) | SetExpr::Product(cs) => {
                1 + cs.iter().map(SetExpr::depth).max().unwrap_or(0)
            }
        }
    }
}

fn check_arity(children: &[SetExpr], what: &str) -> Result<()> {
    if children.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "{what} needs at least two operands, got {}",
            children.len()
        )));
    }
    Ok(())
}
