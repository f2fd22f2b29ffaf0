//! Spectral radius by two independent routes, plus Perron eigenvectors.
//!
//! The power route works on non-negative matrices only. It splits the
//! matrix into irreducible diagonal blocks (strongly connected components of
//! its support graph), so each block iterated is irreducible; after the
//! diagonal shift `A + εI` it is primitive and the iteration converges
//! geometrically. Convergence is measured by the Collatz–Wielandt bracket
//! `min_i (Bx)_i/x_i <= ρ(B) <= max_i (Bx)_i/x_i`, which is rigorous for
//! any positive `x`.
//!
//! The Gelfand route works for arbitrary real square matrices through
//! repeated squaring, `‖A^(2^k)‖^(1/2^k)`.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use super::matrix::{max_norm, Matrix};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Maximum number of squarings used by [`spectral_radius_gelfand`].
pub const MAX_SQUARINGS: usize = 60;

/// Floor on the attainable bracket width, relative to the radius itself.
const ROUNDING_FLOOR: f64 = 64.0 * f64::EPSILON;

/// Diagonal shift used by the power iteration.
pub fn power_shift(a: &Matrix) -> f64 {
    1e-3_f64.max(1e-3 * a.max_entry())
}

/// Perron root together with its normalized eigenvector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerronCertificate {
    pub rho: f64,
    /// Strictly positive, entries sum to one.
    pub eigenvector: Vec<f64>,
    /// `‖A v − ρ v‖_∞`.
    pub residual: f64,
}

pub(crate) struct PowerOutcome {
    pub rho: f64,
    pub vector: Vec<f64>,
    pub gap: f64,
}

/// Shifted power iteration on an irreducible non-negative block.
pub(crate) fn shifted_power(a: &Matrix, tol: f64, max_iter: usize) -> Result<PowerOutcome> {
    let n = a.rows();
    let eps = power_shift(a);
    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    let mut best = (f64::NAN, f64::INFINITY);
    for _ in 0..max_iter.max(1) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = super::matrix::dot(a.row(i), &x) + eps * x[i];
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (yi, xi) in y.iter().zip(&x) {
            let r = yi / xi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let gap = hi - lo;
        let mid = 0.5 * (lo + hi);
        if gap < best.1 {
            best = (mid - eps, gap);
        }
        if gap <= tol.max(ROUNDING_FLOOR * hi) {
            return Ok(PowerOutcome {
                rho: (mid - eps).max(0.0),
                vector: x,
                gap,
            });
        }
        let s: f64 = y.iter().sum();
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / s;
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        estimate: best.0,
        gap: best.1,
    })
}

/// Strongly connected components of the support graph of `a`.
pub(crate) fn irreducible_blocks(a: &Matrix) -> Vec<Vec<usize>> {
    let n = a.rows();
    let mut g = DiGraph::<(), ()>::with_capacity(n, n * n);
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if i != j && a.get(i, j) != 0.0 {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    tarjan_scc(&g)
        .into_iter()
        .map(|comp| {
            let mut idx: Vec<usize> = comp.into_iter().map(|v| v.index()).collect();
            idx.sort_unstable();
            idx
        })
        .collect()
}

/// Spectral radius of a non-negative square matrix by shifted power
/// iteration; the result is within `tol` of `ρ(a)`.
pub fn spectral_radius_power(a: &Matrix, tol: f64, max_iter: usize) -> Result<f64> {
    a.require_square()?;
    a.require_nonnegative()?;
    if a.is_positive() {
        return shifted_power(a, tol, max_iter).map(|p| p.rho);
    }
    let mut rho: f64 = 0.0;
    for block in irreducible_blocks(a) {
        let r = if block.len() == 1 {
            let i = block[0];
            a.get(i, i)
        } else {
            shifted_power(&a.submatrix(&block), tol, max_iter)?.rho
        };
        rho = rho.max(r);
    }
    Ok(rho)
}

/// Spectral radius of any real square matrix through the repeated-squaring
/// Gelfand sequence in the ℓ₁ operator norm.
pub fn spectral_radius_gelfand(a: &Matrix, tol: f64) -> Result<f64> {
    a.require_square()?;
    let norm = a.l1_operator_norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let mut x = a.scale(1.0 / norm);
    // mean_log = log‖A^(2^k)‖ / 2^k, accumulated with Neumaier summation.
    let mut mean_log = LogAccumulator::new(norm.ln());
    let mut prev = norm;
    let mut weight = 1.0;
    for _ in 0..MAX_SQUARINGS {
        x = x.matmul_unchecked(&x);
        let s = x.l1_operator_norm();
        if s == 0.0 {
            return Ok(0.0);
        }
        x.scale_in_place(1.0 / s);
        weight *= 0.5;
        mean_log.add(s.ln() * weight);
        let est = mean_log.value().exp();
        // Successive differences halve asymptotically, so the remaining
        // error is about one difference; stop well inside `tol`.
        if (est - prev).abs() < 0.125 * tol {
            return Ok(est);
        }
        prev = est;
    }
    Ok(prev)
}

struct LogAccumulator {
    sum: f64,
    comp: f64,
}

impl LogAccumulator {
    fn new(start: f64) -> Self {
        Self {
            sum: start,
            comp: 0.0,
        }
    }

    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Perron root and positive eigenvector of a strictly positive matrix,
/// normalized so the coordinates sum to one.
pub fn perron_vector(a: &Matrix, tol: f64) -> Result<PerronCertificate> {
    a.require_square()?;
    if !a.is_positive() {
        return Err(Error::NotPositive(
            "Perron vector requires a strictly positive matrix; lift it first".into(),
        ));
    }
    let out = shifted_power(a, tol, DEFAULT_MAX_ITER)?;
    let s: f64 = out.vector.iter().sum();
    let v: Vec<f64> = out.vector.iter().map(|x| x / s).collect();
    let av = a.mul_vec_unchecked(&v);
    let resid: Vec<f64> = av.iter().zip(&v).map(|(y, x)| y - out.rho * x).collect();
    debug_assert!(out.gap.is_finite());
    Ok(PerronCertificate {
        rho: out.rho,
        eigenvector: v,
        residual: max_norm(&resid),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn example_radii() {
        let tol = DEFAULT_TOL;
        let b1 = m(&[&[2.0, 0.0], &[0.0, 0.0]]);
        let half_sum = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let a1 = m(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!((spectral_radius_power(&b1, tol, DEFAULT_MAX_ITER).unwrap() - 2.0).abs() <= tol);
        assert!(
            (spectral_radius_power(&half_sum, tol, DEFAULT_MAX_ITER).unwrap() - 1.0).abs() <= tol
        );
        assert!(
            spectral_radius_power(&a1, tol, DEFAULT_MAX_ITER)
                .unwrap()
                .abs()
                <= tol
        );
    }

    #[test]
    fn gelfand_on_signed_matrices() {
        let minus_i = Matrix::identity(2).scale(-1.0);
        assert!((spectral_radius_gelfand(&minus_i, DEFAULT_TOL).unwrap() - 1.0).abs() < 1e-12);
        let ci = Matrix::identity(3).scale(-2.5);
        assert!((spectral_radius_gelfand(&ci, DEFAULT_TOL).unwrap() - 2.5).abs() < 1e-12);
        // rotation by 90 degrees scaled by 3
        let rot = m(&[&[0.0, -3.0], &[3.0, 0.0]]);
        assert!((spectral_radius_gelfand(&rot, DEFAULT_TOL).unwrap() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn gelfand_nilpotent_is_zero() {
        let a1 = m(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert_eq!(spectral_radius_gelfand(&a1, DEFAULT_TOL).unwrap(), 0.0);
    }

    #[test]
    fn gelfand_jordan_block() {
        let j = m(&[&[0.5, 1.0], &[0.0, 0.5]]);
        let r = spectral_radius_gelfand(&j, DEFAULT_TOL).unwrap();
        assert!((r - 0.5).abs() <= DEFAULT_TOL, "{r}");
    }

    #[test]
    fn power_reducible_and_defective() {
        let j = m(&[&[0.5, 1.0], &[0.0, 0.5]]);
        let r = spectral_radius_power(&j, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!((r - 0.5).abs() <= DEFAULT_TOL);
        let t = m(&[&[1.0, 5.0, 0.0], &[0.0, 0.0, 2.0], &[0.0, 3.0, 0.0]]);
        let r = spectral_radius_power(&t, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!((r - 6f64.sqrt()).abs() <= DEFAULT_TOL);
    }

    #[test]
    fn power_rejects_bad_input() {
        assert!(matches!(
            spectral_radius_power(&Matrix::zeros(2, 3), DEFAULT_TOL, 10),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            spectral_radius_power(&Matrix::identity(2).scale(-1.0), DEFAULT_TOL, 10),
            Err(Error::NegativeEntry { .. })
        ));
    }

    #[test]
    fn power_reports_non_convergence() {
        // periodic support: the unshifted iteration would oscillate forever
        let a = m(&[&[0.0, 1.0], &[2.0, 0.0]]);
        match spectral_radius_power(&a, 1e-14, 3) {
            Err(Error::NoConvergence { estimate, .. }) => {
                assert!((estimate - 2f64.sqrt()).abs() < 0.1)
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn perron_symmetric_cases() {
        let c = perron_vector(&m(&[&[1.0, 1.0], &[1.0, 1.0]]), DEFAULT_TOL).unwrap();
        assert!((c.rho - 2.0).abs() <= DEFAULT_TOL);
        assert!((c.eigenvector[0] - 0.5).abs() < 1e-12);
        let c = perron_vector(&m(&[&[2.0, 1.0], &[1.0, 2.0]]), DEFAULT_TOL).unwrap();
        assert!((c.rho - 3.0).abs() <= DEFAULT_TOL);
        assert!((c.eigenvector[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn perron_requires_positive() {
        assert!(matches!(
            perron_vector(&Matrix::identity(2), DEFAULT_TOL),
            Err(Error::NotPositive(_))
        ));
    }

    #[test]
    fn irreducible_blocks_of_triangular() {
        let t = m(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert_eq!(irreducible_blocks(&t).len(), 2);
        assert_eq!(irreducible_blocks(&Matrix::ones(3, 3)).len(), 1);
    }
}
