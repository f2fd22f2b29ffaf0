//! Greedy row-swap iteration for the extremal spectral radius of an IRU set.
//!
//! From the current matrix `A` with Perron pair `(ρ, v)`, every row position
//! switches to the row extremizing `a·v`. If some row beats the current one
//! the new matrix satisfies `A'v >= ρv` (max) with strict inequality in at
//! least one coordinate, so `ρ(A') > ρ` for positive sets. When no row
//! improves, `v` itself is the extremality certificate.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::alternative::{certify_extremal, default_cert_tol, CertTarget, Certification};
use crate::error::{Error, Result};
use crate::linalg::{dot, perron_vector, PerronCertificate};
use crate::sets::IruSet;
use crate::Direction;

const PERRON_TOL: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexStep {
    /// Row index chosen at each position.
    pub choice: Vec<usize>,
    pub rho: f64,
    /// Signed change of `ρ` from the previous step (positive means better).
    pub improvement: f64,
    /// Largest row-score gain `|a'·v − a·v|` that triggered the move.
    pub margin: f64,
    /// Threshold the gain had to beat, `tol · min v / 2` at the previous step.
    pub step_tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexTrace {
    pub direction: Direction,
    /// Starting point followed by one entry per accepted swap.
    pub steps: Vec<SimplexStep>,
    /// `(step, position)` pairs where several rows were within the step
    /// tolerance of the best score.
    pub ties: Vec<(usize, usize)>,
    /// Row-score threshold used at the final step.
    pub step_tol: f64,
    /// False if `max_iter` ran out before the stopping rule fired.
    pub converged: bool,
    /// Set when a swap failed to improve `ρ` in floating point.
    pub stalled: bool,
    pub certification: Option<Certification>,
}

impl SimplexTrace {
    /// Number of accepted swaps.
    pub fn iterations(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn terminal(&self) -> &SimplexStep {
        self.steps.last().expect("trace has a starting point")
    }

    pub fn rho(&self) -> f64 {
        self.terminal().rho
    }

    /// True if `ρ` strictly improves at every swap.
    pub fn is_strictly_monotone(&self) -> bool {
        self.steps[1..].iter().all(|s| s.improvement > 0.0)
    }
}

fn score_sign(direction: Direction) -> f64 {
    match direction {
        Direction::Max => 1.0,
        Direction::Min => -1.0,
    }
}

/// Best row per position for weight vector `v`: smallest index among the
/// exact extremizers. Also reports whether a competitor is within `tie_tol`.
fn best_rows(s: &IruSet, v: &[f64], sign: f64, tie_tol: f64) -> Vec<(usize, f64, bool)> {
    s.row_sets()
        .iter()
        .map(|rows| {
            let scores: Vec<f64> = rows.rows().iter().map(|r| sign * dot(r, v)).collect();
            let mut best = 0;
            for (k, &sc) in scores.iter().enumerate() {
                if sc > scores[best] {
                    best = k;
                }
            }
            let near = scores
                .iter()
                .enumerate()
                .filter(|&(k, &sc)| k != best && scores[best] - sc <= tie_tol)
                .count();
            (best, scores[best], near > 0)
        })
        .collect()
}

/// Runs the iteration on a positive IRU set. `tol` bounds the gap between
/// the terminal value and the true extremum: a row switch is only made when
/// it gains more than `tol · min v / 2`, which keeps the final
/// `ρ` within `tol / 2` of optimal.
pub fn spectral_simplex(
    s: &IruSet,
    direction: Direction,
    tol: f64,
    max_iter: usize,
) -> Result<SimplexTrace> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tol must be positive, got {tol}"
        )));
    }
    if s.n_rows() != s.n_cols() {
        return Err(Error::NotSquare {
            rows: s.n_rows(),
            cols: s.n_cols(),
        });
    }
    if !s.is_positive() {
        return Err(Error::NotPositive(
            "spectral simplex needs a positive set; lift boundary sets first".into(),
        ));
    }
    let sign = score_sign(direction);
    let ones = vec![1.0; s.n_cols()];
    let mut choice: Vec<usize> = best_rows(s, &ones, sign, 0.0)
        .into_iter()
        .map(|b| b.0)
        .collect();
    let mut perron = perron_vector(&s.matrix_unchecked(&choice), PERRON_TOL)?;
    let mut steps = vec![SimplexStep {
        choice: choice.clone(),
        rho: perron.rho,
        improvement: 0.0,
        margin: 0.0,
        step_tol: 0.0,
    }];
    let mut seen = HashSet::from([choice.clone()]);
    let mut ties = Vec::new();
    let mut converged = false;
    let mut stalled = false;
    let mut step_tol;
    loop {
        let v = &perron.eigenvector;
        let vmin = v.iter().copied().fold(f64::INFINITY, f64::min);
        step_tol = 0.5 * tol * vmin;
        let best = best_rows(s, v, sign, step_tol);
        let mut next = choice.clone();
        let mut margin: f64 = 0.0;
        for (i, &(k, sc, tie)) in best.iter().enumerate() {
            if tie {
                ties.push((steps.len() - 1, i));
            }
            let cur = sign * dot(s.row_set(i).row(choice[i]), v);
            let gain = sc - cur;
            if gain > step_tol {
                next[i] = k;
                margin = margin.max(gain);
            }
        }
        if next == choice {
            converged = true;
            break;
        }
        if steps.len() > max_iter {
            break;
        }
        let cand = perron_vector(&s.matrix_unchecked(&next), PERRON_TOL)?;
        let improvement = sign * (cand.rho - perron.rho);
        if improvement <= 0.0 || !seen.insert(next.clone()) {
            stalled = true;
            converged = true;
            break;
        }
        steps.push(SimplexStep {
            choice: next.clone(),
            rho: cand.rho,
            improvement,
            margin,
            step_tol,
        });
        choice = next;
        perron = cand;
    }
    let certification = if converged {
        Some(certify_current(s, &choice, &perron, direction, step_tol)?)
    } else {
        None
    };
    Ok(SimplexTrace {
        direction,
        steps,
        ties,
        step_tol,
        converged,
        stalled,
        certification,
    })
}

fn certify_current(
    s: &IruSet,
    choice: &[usize],
    perron: &PerronCertificate,
    direction: Direction,
    step_tol: f64,
) -> Result<Certification> {
    let cert_tol = default_cert_tol(perron.rho).max(2.0 * step_tol);
    certify_extremal(
        CertTarget::Iru(s),
        &s.matrix_unchecked(choice),
        direction,
        cert_tol,
    )
}
