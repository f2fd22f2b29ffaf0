//! Finite-length checks of the finiteness property and of the norm
//! inequality on convex hulls.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{spectral_radius, Matrix};
use crate::sets::{convex_sample_with, ExplicitSet, SetExpr, DEFAULT_SIZE_GUARD};
use crate::Direction;

use super::words::{rho_n_bruteforce, rho_n_min_max};
use super::{rho_extremal_exhaustive, Extremum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinitenessOptions {
    pub n_max: usize,
    pub sandwich_samples: usize,
    /// Base tolerance; the check at length `n` uses `n · tol · max(1, ρ_max)`.
    pub tol: f64,
    pub seed: u64,
    /// Budget for both the expansion and the word enumeration.
    pub size_guard: u128,
}

impl Default for FinitenessOptions {
    fn default() -> Self {
        Self {
            n_max: 4,
            sandwich_samples: 5,
            tol: 1e-7,
            seed: 0,
            size_guard: DEFAULT_SIZE_GUARD,
        }
    }
}

/// Comparison of `ρ̌ₙ`, `ρ̂ₙ` against `ρ_min`, `ρ_max` at one length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordCheck {
    pub n: usize,
    pub sandwich: bool,
    pub rho_check_n: f64,
    pub rho_hat_n: f64,
    pub argmin_word: Vec<usize>,
    pub argmax_word: Vec<usize>,
    pub n_tol: f64,
    pub min_ok: bool,
    pub max_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinitenessFailure {
    pub n: usize,
    pub sandwich: bool,
    pub direction: Direction,
    /// Offending word; letters index the expanded set, followed by the
    /// adjoined samples for sandwich checks.
    pub word: Vec<usize>,
    pub value: f64,
    pub expected: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinitenessReport {
    pub status: CheckStatus,
    pub set_size: usize,
    pub dim: usize,
    pub rho_min: Extremum,
    pub rho_max: Extremum,
    pub checks: Vec<WordCheck>,
    pub failure: Option<FinitenessFailure>,
    pub options: FinitenessOptions,
}

impl FinitenessReport {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

fn check_length(
    s: &ExplicitSet,
    n: usize,
    sandwich: bool,
    rho_min: f64,
    rho_max: f64,
    opts: &FinitenessOptions,
) -> Result<WordCheck> {
    let (lo, hi) = rho_n_min_max(s, n, opts.size_guard)?;
    let n_tol = n as f64 * opts.tol * rho_max.max(1.0);
    Ok(WordCheck {
        n,
        sandwich,
        min_ok: (lo.value - rho_min).abs() <= n_tol,
        max_ok: (hi.value - rho_max).abs() <= n_tol,
        rho_check_n: lo.value,
        rho_hat_n: hi.value,
        argmin_word: lo.word,
        argmax_word: hi.word,
        n_tol,
    })
}

fn first_failure(c: &WordCheck, rho_min: f64, rho_max: f64) -> Option<FinitenessFailure> {
    if !c.min_ok {
        Some(FinitenessFailure {
            n: c.n,
            sandwich: c.sandwich,
            direction: Direction::Min,
            word: c.argmin_word.clone(),
            value: c.rho_check_n,
            expected: rho_min,
        })
    } else if !c.max_ok {
        Some(FinitenessFailure {
            n: c.n,
            sandwich: c.sandwich,
            direction: Direction::Max,
            word: c.argmax_word.clone(),
            value: c.rho_hat_n,
            expected: rho_max,
        })
    } else {
        None
    }
}

/// Checks `ρ̌ₙ = ρ_min` and `ρ̂ₙ = ρ_max` for `n = 1..=n_max` on the
/// expansion of `s`, then again for `n <= 3` after adjoining random convex
/// combinations of members.
pub fn finiteness_verify(s: &SetExpr, opts: &FinitenessOptions) -> Result<FinitenessReport> {
    if opts.n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    if !(opts.tol >= 0.0 && opts.tol.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "invalid tolerance {}",
            opts.tol
        )));
    }
    let set = s.expand(opts.size_guard, None)?;
    let dim = set.require_square()?;
    for m in set.iter() {
        m.require_nonnegative()?;
    }
    let rho_min = rho_extremal_exhaustive(&set, Direction::Min)?;
    let rho_max = rho_extremal_exhaustive(&set, Direction::Max)?;

    let mut checks = Vec::new();
    for n in 1..=opts.n_max {
        checks.push(check_length(
            &set,
            n,
            false,
            rho_min.value,
            rho_max.value,
            opts,
        )?);
    }
    if opts.sandwich_samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let samples = (0..opts.sandwich_samples)
            .map(|_| convex_sample_with(&set, set.len(), &mut rng))
            .collect::<Result<Vec<_>>>()?;
        // keep duplicates of members as separate letters so word indices
        // stay aligned with the sample order
        let mut all = set.matrices().to_vec();
        all.extend(samples);
        let tilde = ExplicitSet::with_tolerance(all, 0.0)?;
        for n in 1..=opts.n_max.min(3) {
            checks.push(check_length(
                &tilde,
                n,
                true,
                rho_min.value,
                rho_max.value,
                opts,
            )?);
        }
    }
    let failure = checks
        .iter()
        .find_map(|c| first_failure(c, rho_min.value, rho_max.value));
    Ok(FinitenessReport {
        status: if failure.is_some() {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        },
        set_size: set.len(),
        dim,
        rho_min,
        rho_max,
        checks,
        failure,
        options: opts.clone(),
    })
}

/// Outcome of the norm inequality over sampled products from the convex hull.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvCheckReport {
    pub status: CheckStatus,
    pub n: usize,
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub rho_check_n: f64,
    pub argmin_word: Vec<usize>,
    /// `(ρ̌ₙ)ⁿ / N`: the bound that is checked.
    pub bound_power: f64,
    /// `ρ̌ₙ / N`: the bound as literally displayed, recorded for comparison.
    pub bound_literal: f64,
    pub min_norm: f64,
    /// Sample indices with `‖Cₙ⋯C₁‖₁ < bound_power − tol`.
    pub norm_failures: Vec<usize>,
    /// Sample indices with `‖Pe‖₁ < ρ(P) − tol`.
    pub srbound_failures: Vec<usize>,
    /// Number of samples below `bound_literal − tol`.
    pub literal_failures: usize,
    /// Smallest `‖Pe‖₁ − ρ(P)` seen.
    pub min_srbound_slack: f64,
}

/// Samples `samples` tuples `(C₁, …, Cₙ)` of convex combinations of members
/// and checks `‖Cₙ⋯C₁‖₁ >= (ρ̌ₙ)ⁿ / N − tol` and `‖Pe‖₁ >= ρ(P) − tol`
/// for each product `P`.
pub fn conv_lsr_check(
    s: &ExplicitSet,
    n: usize,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<ConvCheckReport> {
    let dim = s.require_square()?;
    let lo = rho_n_bruteforce(s, n, Direction::Min, DEFAULT_SIZE_GUARD)?;
    let bound_power = lo.value.powi(n as i32) / dim as f64;
    let bound_literal = lo.value / dim as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ones = vec![1.0; dim];
    let mut report = ConvCheckReport {
        status: CheckStatus::Pass,
        n,
        dim,
        samples,
        seed,
        tol,
        rho_check_n: lo.value,
        argmin_word: lo.word,
        bound_power,
        bound_literal,
        min_norm: f64::INFINITY,
        norm_failures: Vec::new(),
        srbound_failures: Vec::new(),
        literal_failures: 0,
        min_srbound_slack: f64::INFINITY,
    };
    for j in 0..samples {
        let mut p = Matrix::identity(dim);
        for _ in 0..n {
            let c = convex_sample_with(s, s.len(), &mut rng)?;
            p = c.matmul_unchecked(&p);
        }
        let norm = p.l1_operator_norm();
        report.min_norm = report.min_norm.min(norm);
        if norm < bound_power - tol {
            report.norm_failures.push(j);
        }
        if norm < bound_literal - tol {
            report.literal_failures += 1;
        }
        let pe: f64 = p.mul_vec_unchecked(&ones).iter().sum();
        let slack = pe - spectral_radius(&p)?;
        report.min_srbound_slack = report.min_srbound_slack.min(slack);
        if slack < -tol {
            report.srbound_failures.push(j);
        }
    }
    if !report.norm_failures.is_empty() || !report.srbound_failures.is_empty() {
        report.status = CheckStatus::Fail;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::IruSet;

    fn example_a() -> ExplicitSet {
        ExplicitSet::new(vec![
            Matrix::from_rows(&[[0.0, 2.0], [0.0, 0.0]]).unwrap(),
            Matrix::from_rows(&[[0.0, 0.0], [2.0, 0.0]]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn example_pair_fails_at_length_two() {
        let r = finiteness_verify(&example_a().into(), &FinitenessOptions::default()).unwrap();
        assert_eq!(r.status, CheckStatus::Fail);
        let f = r.failure.unwrap();
        assert_eq!((f.n, f.direction, f.sandwich), (2, Direction::Max, false));
        assert!((f.value - 2.0).abs() < 1e-9);
        assert_eq!(f.expected, 0.0);
        let mut w = f.word.clone();
        w.sort();
        assert_eq!(w, vec![0, 1]);
    }

    #[test]
    fn positive_iru_passes() {
        let s = IruSet::from_rows(vec![
            vec![vec![1.0, 2.0], vec![0.5, 0.5], vec![1.5, 0.2]],
            vec![vec![3.0, 1.0], vec![1.0, 1.0]],
        ])
        .unwrap();
        let r = finiteness_verify(&s.into(), &FinitenessOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", r.failure);
        assert_eq!(r.set_size, 6);
        assert_eq!(r.checks.len(), 4 + 3);
    }

    #[test]
    fn identity_norm_bound() {
        let s = ExplicitSet::singleton(Matrix::identity(3));
        let r = conv_lsr_check(&s, 2, 10, 1, 1e-9).unwrap();
        assert_eq!(r.status, CheckStatus::Pass);
        assert!((r.min_norm - 1.0).abs() < 1e-12);
        assert!((r.bound_power - 1.0 / 3.0).abs() < 1e-12);
    }
}
