//! Sub- and super-eigenvector tests for non-negative matrices.
//!
//! For non-negative `A`:
//! 1. `Au <= λu` with `u > 0` gives `ρ(A) <= λ`;
//! 2. if also `A > 0` and `Au != λu`, then `ρ(A) < λ`;
//! 3. `Au >= λu` with `u >= 0`, `u != 0`, `λ >= 0` gives `ρ(A) >= λ`;
//! 4. if also `A > 0` and `Au != λu`, then `ρ(A) > λ`.

use serde::{Deserialize, Serialize};

use super::matrix::{max_norm, Matrix};
use crate::error::{Error, Result};

/// Threshold above which `Au` and `λu` are declared different.
pub fn strict_tolerance(lambda_u_max: f64) -> f64 {
    1e-9 * lambda_u_max.max(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    AtMost,
    Below,
    AtLeast,
    Above,
}

impl Conclusion {
    /// Whether a computed radius `rho` is compatible with this conclusion
    /// about `lambda`, up to `tol`.
    pub fn compatible(self, rho: f64, lambda: f64, tol: f64) -> bool {
        match self {
            Conclusion::AtMost | Conclusion::Below => rho <= lambda + tol,
            Conclusion::AtLeast | Conclusion::Above => rho >= lambda - tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub lambda: f64,
    /// Hypothesis 1 holds.
    pub upper: bool,
    /// Hypothesis 2 holds.
    pub strict_upper: bool,
    /// Hypothesis 3 holds.
    pub lower: bool,
    /// Hypothesis 4 holds.
    pub strict_lower: bool,
    /// `‖Au − λu‖_∞`.
    pub deviation: f64,
}

impl BoundVerdict {
    /// Conclusions implied by the hypotheses that hold, strongest first.
    pub fn conclusions(&self) -> Vec<Conclusion> {
        let mut out = Vec::new();
        if self.strict_upper {
            out.push(Conclusion::Below);
        } else if self.upper {
            out.push(Conclusion::AtMost);
        }
        if self.strict_lower {
            out.push(Conclusion::Above);
        } else if self.lower {
            out.push(Conclusion::AtLeast);
        }
        out
    }

    pub fn consistent_with(&self, rho: f64, tol: f64) -> bool {
        self.conclusions()
            .into_iter()
            .all(|c| c.compatible(rho, self.lambda, tol))
    }
}

/// Reports which bound hypotheses hold for `(a, u, lambda)`. Weak
/// inequalities are tested with slack `tol`.
pub fn classify_bound(a: &Matrix, u: &[f64], lambda: f64, tol: f64) -> Result<BoundVerdict> {
    let n = a.require_square()?;
    if u.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for {n}x{n} matrix",
            u.len()
        )));
    }
    a.require_nonnegative()?;
    let au = a.mul_vec_unchecked(u);
    let lu: Vec<f64> = u.iter().map(|x| lambda * x).collect();
    let diff: Vec<f64> = au.iter().zip(&lu).map(|(x, y)| x - y).collect();
    let deviation = max_norm(&diff);
    let differs = deviation > strict_tolerance(max_norm(&lu));
    let positive_a = a.is_positive();

    let upper = u.iter().all(|&x| x > 0.0) && diff.iter().all(|&d| d <= tol);
    let lower = lambda >= 0.0
        && u.iter().all(|&x| x >= 0.0)
        && u.iter().any(|&x| x > 0.0)
        && diff.iter().all(|&d| d >= -tol);
    Ok(BoundVerdict {
        lambda,
        upper,
        strict_upper: upper && positive_a && differs,
        lower,
        strict_lower: lower && positive_a && differs,
        deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::radius::{
        perron_vector, spectral_radius_power, DEFAULT_MAX_ITER, DEFAULT_TOL,
    };

    #[test]
    fn perron_pair_gives_both_weak_bounds() {
        let a = Matrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let v = [0.5, 0.5];
        let verdict = classify_bound(&a, &v, 3.0, 1e-12).unwrap();
        assert!(verdict.upper && verdict.lower);
        assert!(!verdict.strict_upper && !verdict.strict_lower);
        assert_eq!(
            verdict.conclusions(),
            vec![Conclusion::AtMost, Conclusion::AtLeast]
        );
    }

    #[test]
    fn strict_slack_gives_strict_upper() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [3.0, 1.0]]).unwrap();
        let p = perron_vector(&a, DEFAULT_TOL).unwrap();
        // lambda slightly above rho on one coordinate only
        let u = p.eigenvector.clone();
        let au = a.mul_vec(&u).unwrap();
        let lambda = (au[0] / u[0]).max(au[1] / u[1]) + 0.05;
        let verdict = classify_bound(&a, &u, lambda, 1e-12).unwrap();
        assert!(verdict.strict_upper);
        let rho = spectral_radius_power(&a, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(rho < lambda);
        assert!(verdict.consistent_with(rho, DEFAULT_TOL));
    }

    #[test]
    fn min_row_sum_is_lower_bound() {
        let a = Matrix::from_rows(&[[0.0, 1.0, 2.0], [0.5, 0.5, 0.0], [3.0, 0.0, 0.0]]).unwrap();
        let lambda = (0..3)
            .map(|i| a.row(i).iter().sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        let verdict = classify_bound(&a, &[1.0, 1.0, 1.0], lambda, 0.0).unwrap();
        assert!(verdict.lower);
        let rho = spectral_radius_power(&a, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(rho >= lambda - DEFAULT_TOL);
    }

    #[test]
    fn dimension_mismatch() {
        let a = Matrix::identity(2);
        assert!(matches!(
            classify_bound(&a, &[1.0], 1.0, 0.0),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
