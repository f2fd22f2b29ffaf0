//! Seeded random instances: IRU sets, ordered chains, polynomial expressions
//! and plain non-negative matrices.
//!
//! Every generator draws from a `ChaCha8Rng` seeded with `seed_from_u64`,
//! so the same parameters always give the same instance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::sets::{ExplicitSet, IruSet, OrderedChain, SetExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    Iru,
    Chain,
    Expr,
}

impl std::str::FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iru" => Ok(GenKind::Iru),
            "chain" => Ok(GenKind::Chain),
            "expr" => Ok(GenKind::Expr),
            other => Err(Error::InvalidArgument(format!(
                "kind must be iru, chain or expr, got {other}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub kind: GenKind,
    /// Matrix dimension.
    pub n: usize,
    /// Largest row-set size (IRU) or chain length.
    pub width: usize,
    pub lo: f64,
    pub hi: f64,
    pub seed: u64,
    /// Permit `lo = 0`.
    pub allow_boundary: bool,
    /// Maximum tree depth for expressions.
    pub depth: usize,
    /// Cap on the number of matrices an expression may expand to.
    pub max_size: u128,
    /// Lift applied to chain leaves inside expressions.
    pub epsilon: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            kind: GenKind::Iru,
            n: 2,
            width: 3,
            lo: 0.1,
            hi: 2.0,
            seed: 0,
            allow_boundary: false,
            depth: 2,
            max_size: 200,
            epsilon: 1e-3,
        }
    }
}

impl GenParams {
    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.width == 0 {
            return Err(Error::InvalidArgument(
                "n and width must be at least 1".into(),
            ));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi) {
            return Err(Error::InvalidArgument(format!(
                "invalid entry range [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.lo < 0.0 {
            return Err(Error::InvalidArgument(
                "entries must be non-negative".into(),
            ));
        }
        if self.lo == 0.0 && !self.allow_boundary {
            return Err(Error::InvalidArgument(
                "lo = 0 gives boundary instances; pass allow_boundary to accept them".into(),
            ));
        }
        if self.kind == GenKind::Expr && !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidArgument("epsilon must be positive".into()));
        }
        Ok(())
    }
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

/// IRU set with `1..=width` rows per position, entries i.i.d. in `[lo, hi]`.
pub fn random_iru<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    width: usize,
    lo: f64,
    hi: f64,
) -> IruSet {
    let row_sets = (0..n)
        .map(|_| {
            let k = rng.random_range(1..=width);
            (0..k)
                .map(|_| (0..n).map(|_| uniform(rng, lo, hi)).collect())
                .collect()
        })
        .collect();
    IruSet::from_rows(row_sets).expect("generated rows are consistent")
}

/// Chain of `len` matrices: a base in `[lo, hi]` plus cumulative
/// increments in `[0, (hi − lo) / len]`.
pub fn random_chain<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    len: usize,
    lo: f64,
    hi: f64,
) -> OrderedChain {
    let step = (hi - lo) / len as f64;
    let mut cur = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            cur.set(i, j, uniform(rng, lo, hi));
        }
    }
    let mut out = vec![cur.clone()];
    for _ in 1..len {
        for i in 0..n {
            for j in 0..n {
                cur.set(i, j, cur.get(i, j) + uniform(rng, 0.0, step));
            }
        }
        out.push(cur.clone());
    }
    OrderedChain::new(out).expect("cumulative increments keep the order")
}

/// Square matrix with entries in `[0, hi]`, each zero with probability `zero_prob`.
pub fn random_nonneg_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    hi: f64,
    zero_prob: f64,
) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if !rng.random_bool(zero_prob) {
                m.set(i, j, uniform(rng, 0.0, hi));
            }
        }
    }
    m
}

/// Explicit set of `count` non-negative matrices (before deduplication).
pub fn random_explicit<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    count: usize,
    hi: f64,
    zero_prob: f64,
) -> ExplicitSet {
    let ms = (0..count)
        .map(|_| random_nonneg_matrix(rng, n, hi, zero_prob))
        .collect();
    ExplicitSet::new(ms).expect("same shapes")
}

fn random_leaf<R: Rng + ?Sized>(rng: &mut R, p: &GenParams) -> Result<SetExpr> {
    let width = p.width.min(3);
    Ok(if rng.random_bool(0.6) {
        random_iru(rng, p.n, width, p.lo, p.hi).into()
    } else {
        let len = rng.random_range(1..=width);
        random_chain(rng, p.n, len, 0.0, p.hi)
            .epsilon_lift(p.epsilon)?
            .into()
    })
}

fn random_tree<R: Rng + ?Sized>(rng: &mut R, p: &GenParams, depth: usize) -> Result<SetExpr> {
    if depth == 0 || rng.random_bool(0.3) {
        return random_leaf(rng, p);
    }
    Ok(match rng.random_range(0..3) {
        0 => SetExpr::sum(vec![
            random_tree(rng, p, depth - 1)?,
            random_tree(rng, p, depth - 1)?,
        ]),
        1 => SetExpr::product(vec![
            random_tree(rng, p, depth - 1)?,
            random_tree(rng, p, depth - 1)?,
        ]),
        _ => SetExpr::scale(uniform(rng, 0.25, 2.0), random_tree(rng, p, depth - 1)?),
    })
}

const EXPR_ATTEMPTS: usize = 1000;

/// Expression of depth at most `depth` whose expansion has at most
/// `max_size` members; trees over the cap are redrawn.
pub fn random_expr<R: Rng + ?Sized>(rng: &mut R, p: &GenParams) -> Result<SetExpr> {
    for _ in 0..EXPR_ATTEMPTS {
        let e = random_tree(rng, p, p.depth)?;
        if e.cardinality_bound() <= p.max_size {
            return Ok(e);
        }
    }
    Err(Error::InvalidArgument(format!(
        "no expression of depth {} within {} matrices after {EXPR_ATTEMPTS} draws",
        p.depth, p.max_size
    )))
}

/// Instance described by `p`.
pub fn gen_instance(p: &GenParams) -> Result<SetExpr> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    match p.kind {
        GenKind::Iru => Ok(random_iru(&mut rng, p.n, p.width, p.lo, p.hi).into()),
        GenKind::Chain => Ok(random_chain(&mut rng, p.n, p.width, p.lo, p.hi).into()),
        GenKind::Expr => random_expr(&mut rng, p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor;
    use crate::sets::{chain_validate, SetLeaf};

    #[test]
    fn same_seed_same_bytes() {
        for kind in [GenKind::Iru, GenKind::Chain, GenKind::Expr] {
            let p = GenParams {
                kind,
                seed: 42,
                ..GenParams::default()
            };
            let a = descriptor::to_string(&gen_instance(&p).unwrap());
            let b = descriptor::to_string(&gen_instance(&p).unwrap());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn chains_are_ordered() {
        for seed in 0..20 {
            let p = GenParams {
                kind: GenKind::Chain,
                width: 5,
                seed,
                ..GenParams::default()
            };
            match gen_instance(&p).unwrap() {
                SetExpr::Leaf(SetLeaf::Chain(c)) => chain_validate(c.matrices()).unwrap(),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn boundary_needs_opt_in() {
        let mut p = GenParams {
            lo: 0.0,
            ..GenParams::default()
        };
        assert!(gen_instance(&p).is_err());
        p.allow_boundary = true;
        assert!(gen_instance(&p).is_ok());
        p.lo = 3.0;
        assert!(gen_instance(&p).is_err());
    }

    #[test]
    fn expressions_respect_caps() {
        for seed in 0..20 {
            let p = GenParams {
                kind: GenKind::Expr,
                depth: 3,
                max_size: 50,
                seed,
                ..GenParams::default()
            };
            let e = gen_instance(&p).unwrap();
            assert!(e.depth() <= 3);
            assert!(e.cardinality_bound() <= 50);
            assert!(e.shape().is_ok());
        }
    }
}
