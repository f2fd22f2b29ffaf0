//! Spectral characteristics of structured sets of non-negative matrices.
//!
//! The crate computes and certifies the extremal spectral radii
//! (`ρ_min`, `ρ_max`), the generalized and lower spectral radii and their
//! finite-length approximations for:
//!
//! - independent row uncertainty (IRU) sets, where each row of a matrix is
//!   chosen independently from a finite set of admissible rows;
//! - finite linearly ordered chains `A₁ <= A₂ <= … <= Aₙ`;
//! - polynomial Minkowski combinations (sums of products of positively
//!   scaled sets) of the two.
//!
//! For these families every product of length `n` has spectral radius
//! between `ρ_min^n` and `ρ_max^n`, so the joint and lower spectral radii
//! reduce to a single extremal eigenvalue problem. The [`spectral`] module
//! finds the extremal member and [`alternative`] turns its Perron vector
//! into a certificate that anyone can re-check row by row.
//!
//! Module map:
//!
//! - [`linalg`]: dense kernels, spectral radius by power iteration and by
//!   Gelfand squaring, Perron vectors, eigenvalue bound tests.
//! - [`sets`]: IRU sets, chains, explicit sets, Minkowski operations,
//!   ε-lifts, Hausdorff distance, convex sampling.
//! - [`alternative`]: hourglass decisions and extremality certificates.
//! - [`spectral`]: extremal radii, the spectral simplex iteration, word
//!   enumeration, JSR/LSR brackets and the finiteness and convex-hull checks.
//! - [`descriptor`], [`generate`], [`report`], [`cli`]: JSON set
//!   descriptors, random instance generators, run reports and the command
//!   surface used by the `hourglass` binary.

pub mod alternative;
pub mod cli;
pub mod descriptor;
mod error;
pub mod generate;
pub mod linalg;
pub mod report;
pub mod sets;
pub mod spectral;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use sets::{ExplicitSet, IruSet, OrderedChain, RowSet, SetExpr};

use serde::{Deserialize, Serialize};

/// Which extremum is sought.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Min,
    Max,
}

impl Direction {
    /// True if `candidate` is strictly better than `incumbent`.
    pub fn improves(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Direction::Min => candidate < incumbent,
            Direction::Max => candidate > incumbent,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Min => "min",
            Direction::Max => "max",
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Direction::Min),
            "max" => Ok(Direction::Max),
            other => Err(Error::InvalidArgument(format!(
                "direction must be min or max, got {other}"
            ))),
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
