//! Structured matrix sets and their Minkowski algebra.

mod chain;
mod explicit;
mod expr;
mod iru;

pub use chain::{chain_validate, OrderedChain};
pub use explicit::{
    convex_sample, convex_sample_with, default_dedup_tol, hausdorff_distance, minkowski_product,
    minkowski_sum, simplex_weights, ExplicitSet, HausdorffReport, HausdorffWitness, SetNorm,
};
pub use expr::{SetExpr, SetLeaf, DEFAULT_SIZE_GUARD};
pub use iru::{iru_minkowski_sum, ChoiceIter, ColumnUncertaintySet, IruSet, RowSet};
