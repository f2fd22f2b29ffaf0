//! Hourglass decisions on IRU and explicit sets, plus Perron-based extremality certificates.
//!
//! Given a member `Ã` of a set and `u > 0`, put `v = Ãu`. The set satisfies
//! the lower branch (H1) at `(Ã, u)` when either `Au >= v` for every member
//! or some member `Ā` has `Āu <= v` with `Āu != v`; the upper branch (H2) is
//! the mirror image. IRU sets satisfy both branches for every `(Ã, u)`, and
//! the witness is built by swapping a single row of `Ã`. For explicit sets
//! the alternative can only be probed by sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, max_norm, perron_vector, Matrix, PerronCertificate};
use crate::sets::{ExplicitSet, IruSet};
use crate::Direction;

/// Which branch of the alternative is tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Everything above `v`, or a witness below it.
    H1,
    /// Everything below `v`, or a witness above it.
    H2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    AllOnSide,
    Witness,
    /// Neither branch holds. Only an explicit scan can report this.
    Violated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HourglassOutcome {
    pub branch: Branch,
    pub verdict: Verdict,
    pub witness_matrix: Option<Matrix>,
    /// Row choice of the witness (IRU decisions) or its index (explicit scans).
    pub witness_choice: Option<Vec<usize>>,
    /// For a witness: `v − Āu` (H1) or `Āu − v` (H2). Otherwise the per-row
    /// worst case, `min_A (Au)_i − v_i` (H1) or `v_i − max_A (Au)_i` (H2).
    pub slack: Vec<f64>,
    /// Row positions where some other admissible row lands within
    /// `strict_tol` of `v`; these comparisons were treated as ties.
    pub ties: Vec<usize>,
    pub strict_tol: f64,
}

/// `1e-9 · (1 + ‖v‖_∞)`.
pub fn default_strict_tol(v: &[f64]) -> f64 {
    1e-9 * (1.0 + max_norm(v))
}

fn check_u(u: &[f64], dim: usize) -> Result<()> {
    if u.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for matrices with {dim} columns",
            u.len()
        )));
    }
    if !u.iter().all(|&x| x > 0.0 && x.is_finite()) {
        return Err(Error::NotPositive("u must be strictly positive".into()));
    }
    Ok(())
}

/// Exact H1 decision on an IRU set.
pub fn hourglass_h1_iru(
    s: &IruSet,
    a_tilde: &[usize],
    u: &[f64],
    strict_tol: Option<f64>,
) -> Result<HourglassOutcome> {
    hourglass_iru(s, a_tilde, u, Branch::H1, strict_tol)
}

/// Exact H2 decision on an IRU set.
pub fn hourglass_h2_iru(
    s: &IruSet,
    a_tilde: &[usize],
    u: &[f64],
    strict_tol: Option<f64>,
) -> Result<HourglassOutcome> {
    hourglass_iru(s, a_tilde, u, Branch::H2, strict_tol)
}

pub fn hourglass_iru(
    s: &IruSet,
    a_tilde: &[usize],
    u: &[f64],
    branch: Branch,
    strict_tol: Option<f64>,
) -> Result<HourglassOutcome> {
    if !s.is_positive() {
        return Err(Error::NotPositive(
            "hourglass decision needs a positive IRU set".into(),
        ));
    }
    s.check_choice(a_tilde)?;
    check_u(u, s.n_cols())?;
    let tilde = s.matrix_unchecked(a_tilde);
    let v = tilde.mul_vec_unchecked(u);
    let tol = strict_tol.unwrap_or_else(|| default_strict_tol(&v));
    // sign flips H2 into H1: compare sign·(a·u) against sign·v
    let sign = match branch {
        Branch::H1 => 1.0,
        Branch::H2 => -1.0,
    };

    let mut margins = Vec::with_capacity(s.n_rows());
    let mut ties = Vec::new();
    let mut offender: Option<(usize, usize)> = None;
    for (i, rows) in s.row_sets().iter().enumerate() {
        let mut worst = f64::INFINITY;
        let mut tied = false;
        for (k, row) in rows.rows().iter().enumerate() {
            let m = sign * (dot(row, u) - v[i]);
            worst = worst.min(m);
            if k != a_tilde[i] && m.abs() <= tol {
                tied = true;
            }
            if m < -tol && offender.is_none() {
                offender = Some((i, k));
            }
        }
        if tied {
            ties.push(i);
        }
        margins.push(worst);
    }

    match offender {
        None => Ok(HourglassOutcome {
            branch,
            verdict: Verdict::AllOnSide,
            witness_matrix: None,
            witness_choice: None,
            slack: margins,
            ties,
            strict_tol: tol,
        }),
        Some((i, k)) => {
            let mut choice = a_tilde.to_vec();
            choice[i] = k;
            let bar = s.matrix_unchecked(&choice);
            let bar_u = bar.mul_vec_unchecked(u);
            let slack = bar_u.iter().zip(&v).map(|(b, x)| sign * (x - b)).collect();
            Ok(HourglassOutcome {
                branch,
                verdict: Verdict::Witness,
                witness_matrix: Some(bar),
                witness_choice: Some(choice),
                slack,
                ties,
                strict_tol: tol,
            })
        }
    }
}

/// Decides one branch at `(s[tilde_index], u)` by scanning every member.
pub fn hourglass_scan_explicit(
    s: &ExplicitSet,
    tilde_index: usize,
    u: &[f64],
    branch: Branch,
    strict_tol: Option<f64>,
) -> Result<HourglassOutcome> {
    let images: Vec<Vec<f64>> = s.iter().map(|a| a.mul_vec_unchecked(u)).collect();
    scan_images(s, &images, tilde_index, u, branch, strict_tol)
}

fn scan_images(
    s: &ExplicitSet,
    images: &[Vec<f64>],
    tilde_index: usize,
    u: &[f64],
    branch: Branch,
    strict_tol: Option<f64>,
) -> Result<HourglassOutcome> {
    let tilde = s.get(tilde_index).ok_or_else(|| {
        Error::IndexOutOfRange(format!("member {tilde_index} of a set of {}", s.len()))
    })?;
    check_u(u, s.shape().1)?;
    let v = &images[tilde_index];
    let tol = strict_tol.unwrap_or_else(|| default_strict_tol(v));
    let sign = match branch {
        Branch::H1 => 1.0,
        Branch::H2 => -1.0,
    };
    debug_assert_eq!(tilde.rows(), v.len());

    let n = v.len();
    let mut worst = vec![f64::INFINITY; n];
    let mut ties = Vec::new();
    let mut all_on_side = true;
    for (idx, w) in images.iter().enumerate() {
        for i in 0..n {
            let m = sign * (w[i] - v[i]);
            worst[i] = worst[i].min(m);
            if m < -tol {
                all_on_side = false;
            }
            if idx != tilde_index && m.abs() <= tol && m != 0.0 && !ties.contains(&i) {
                ties.push(i);
            }
        }
    }
    ties.sort_unstable();
    if all_on_side {
        return Ok(HourglassOutcome {
            branch,
            verdict: Verdict::AllOnSide,
            witness_matrix: None,
            witness_choice: None,
            slack: worst,
            ties,
            strict_tol: tol,
        });
    }
    // witness: sign·(v − w) >= −tol everywhere and > tol somewhere
    for (idx, w) in images.iter().enumerate() {
        let slack: Vec<f64> = w.iter().zip(v).map(|(b, x)| sign * (x - b)).collect();
        if slack.iter().all(|&d| d >= -tol) && slack.iter().any(|&d| d > tol) {
            return Ok(HourglassOutcome {
                branch,
                verdict: Verdict::Witness,
                witness_matrix: Some(s.matrices()[idx].clone()),
                witness_choice: Some(vec![idx]),
                slack,
                ties,
                strict_tol: tol,
            });
        }
    }
    Ok(HourglassOutcome {
        branch,
        verdict: Verdict::Violated,
        witness_matrix: None,
        witness_choice: None,
        slack: worst,
        ties,
        strict_tol: tol,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ProbeStatus {
    Pass,
    Violation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeViolation {
    pub trial: usize,
    pub tilde_index: usize,
    pub u: Vec<f64>,
    pub branch: Branch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub status: ProbeStatus,
    pub trials: usize,
    pub seed: u64,
    pub set_size: usize,
    /// Sorted by trial index.
    pub violations: Vec<ProbeViolation>,
    /// Trials in which at least one comparison fell inside the tie band.
    pub trials_with_ties: usize,
    pub note: String,
}

/// Samples `(Ã, u)` pairs and checks both branches by exhaustive scan.
///
/// `Ã` is uniform over the members and each coordinate of `u` is
/// log-uniform in `[0.1, 10]`. A PASS is evidence, not proof.
pub fn hourglass_probe_explicit(
    s: &ExplicitSet,
    trials: usize,
    seed: u64,
    strict_tol: Option<f64>,
) -> Result<ProbeReport> {
    if !s.is_positive() {
        return Err(Error::NotPositive(
            "hourglass probe needs a positive set".into(),
        ));
    }
    let cols = s.shape().1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<(usize, Vec<f64>)> = (0..trials)
        .map(|_| {
            let idx = rng.random_range(0..s.len());
            let u = (0..cols)
                .map(|_| 10f64.powf(rng.random_range(-1.0..=1.0)))
                .collect();
            (idx, u)
        })
        .collect();

    let results: Vec<(Vec<ProbeViolation>, bool)> = samples
        .par_iter()
        .enumerate()
        .map(|(trial, (idx, u))| {
            let images: Vec<Vec<f64>> = s.iter().map(|a| a.mul_vec_unchecked(u)).collect();
            let mut found = Vec::new();
            let mut tied = false;
            for branch in [Branch::H1, Branch::H2] {
                let out = scan_images(s, &images, *idx, u, branch, strict_tol)
                    .expect("validated trial parameters");
                tied |= !out.ties.is_empty();
                if out.verdict == Verdict::Violated {
                    found.push(ProbeViolation {
                        trial,
                        tilde_index: *idx,
                        u: u.clone(),
                        branch,
                    });
                }
            }
            (found, tied)
        })
        .collect();

    let trials_with_ties = results.iter().filter(|r| r.1).count();
    let violations: Vec<ProbeViolation> = results.into_iter().flat_map(|r| r.0).collect();
    let status = if violations.is_empty() {
        ProbeStatus::Pass
    } else {
        ProbeStatus::Violation
    };
    let note = match status {
        ProbeStatus::Pass => format!(
            "no violation in {trials} sampled (Ã, u) pairs; sampling cannot prove the alternative holds everywhere"
        ),
        ProbeStatus::Violation => format!(
            "{} violating (Ã, u) pairs: the set does not satisfy the hourglass alternative",
            violations.len()
        ),
    };
    Ok(ProbeReport {
        status,
        trials,
        seed,
        set_size: s.len(),
        violations,
        trials_with_ties,
        note,
    })
}

/// Set over which an extremality certificate is checked.
#[derive(Clone, Copy, Debug)]
pub enum CertTarget<'a> {
    /// Checked row by row: `Σ|𝒜ᵢ|` comparisons.
    Iru(&'a IruSet),
    /// Checked member by member.
    Explicit(&'a ExplicitSet),
}

impl<'a> From<&'a IruSet> for CertTarget<'a> {
    fn from(s: &'a IruSet) -> Self {
        CertTarget::Iru(s)
    }
}

impl<'a> From<&'a ExplicitSet> for CertTarget<'a> {
    fn from(s: &'a ExplicitSet) -> Self {
        CertTarget::Explicit(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Margins {
    /// `margins[i][k]` for row `k` of row set `i`.
    Rows(Vec<Vec<f64>>),
    /// Worst coordinate per member.
    Matrices(Vec<f64>),
}

impl Margins {
    pub fn worst(&self) -> f64 {
        match self {
            Margins::Rows(r) => r.iter().flatten().copied().fold(f64::INFINITY, f64::min),
            Margins::Matrices(m) => m.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    fn first_violation(&self, cert_tol: f64) -> Option<(ViolationLocation, f64)> {
        match self {
            Margins::Rows(r) => r.iter().enumerate().find_map(|(i, row)| {
                row.iter().position(|&m| m < -cert_tol).map(|k| {
                    (
                        ViolationLocation::Row {
                            position: i,
                            row: k,
                        },
                        row[k],
                    )
                })
            }),
            Margins::Matrices(m) => m
                .iter()
                .position(|&x| x < -cert_tol)
                .map(|k| (ViolationLocation::Matrix { index: k }, m[k])),
        }
    }
}

/// Perron witness that a candidate attains `ρ_min` (or `ρ_max`) of a set.
///
/// For `Min`, every margin `(Aṽ)_i − ρ*ṽ_i` is at least `−cert_tol`, so
/// `Aṽ >= ρ*ṽ` holds for every member and every convex combination of
/// members, and every product of `n` such matrices has spectral radius at
/// least `(ρ*)^n`. `Max` is the mirror image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalCertificate {
    pub direction: Direction,
    pub extremal_matrix: Matrix,
    pub perron: PerronCertificate,
    pub margins: Margins,
    pub cert_tol: f64,
}

impl ExtremalCertificate {
    pub fn rho(&self) -> f64 {
        self.perron.rho
    }

    /// Bound that holds without any tolerance: margins of `−δ` weaken
    /// `ρ*` by `δ / min ṽ`.
    pub fn guaranteed_bound(&self) -> f64 {
        let deficit = (-self.margins.worst()).max(0.0);
        let vmin = self
            .perron
            .eigenvector
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let slack = deficit / vmin;
        match self.direction {
            Direction::Min => self.perron.rho - slack,
            Direction::Max => self.perron.rho + slack,
        }
    }

    /// Recomputes the margins from the stored eigen-pair against `target`
    /// and checks them, together with the stored residual, against
    /// `cert_tol`.
    pub fn reverify(&self, target: CertTarget<'_>) -> Result<bool> {
        let v = &self.perron.eigenvector;
        if !v.iter().all(|&x| x > 0.0) {
            return Ok(false);
        }
        let av = self.extremal_matrix.mul_vec(v)?;
        let resid = max_norm(
            &av.iter()
                .zip(v)
                .map(|(y, x)| y - self.perron.rho * x)
                .collect::<Vec<_>>(),
        );
        if resid > self.cert_tol {
            return Ok(false);
        }
        let margins = compute_margins(target, v, self.perron.rho, self.direction)?;
        Ok(margins.first_violation(self.cert_tol).is_none())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationLocation {
    Row { position: usize, row: usize },
    Matrix { index: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rejection {
    pub location: ViolationLocation,
    pub margin: f64,
    pub candidate_rho: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    Certified(ExtremalCertificate),
    Rejected(Rejection),
}

impl Certification {
    pub fn certificate(&self) -> Option<&ExtremalCertificate> {
        match self {
            Certification::Certified(c) => Some(c),
            Certification::Rejected(_) => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified(_))
    }
}

/// Default certificate tolerance for a candidate with spectral radius `rho`.
pub fn default_cert_tol(rho: f64) -> f64 {
    1e-9 * rho.max(1.0)
}

fn compute_margins(
    target: CertTarget<'_>,
    v: &[f64],
    rho: f64,
    direction: Direction,
) -> Result<Margins> {
    let sign = match direction {
        Direction::Min => 1.0,
        Direction::Max => -1.0,
    };
    match target {
        CertTarget::Iru(s) => {
            check_u(v, s.n_cols())?;
            if s.n_rows() != v.len() {
                return Err(Error::NotSquare {
                    rows: s.n_rows(),
                    cols: s.n_cols(),
                });
            }
            Ok(Margins::Rows(
                s.row_sets()
                    .iter()
                    .enumerate()
                    .map(|(i, rows)| {
                        rows.rows()
                            .iter()
                            .map(|r| sign * (dot(r, v) - rho * v[i]))
                            .collect()
                    })
                    .collect(),
            ))
        }
        CertTarget::Explicit(s) => {
            s.require_square()?;
            check_u(v, s.shape().1)?;
            Ok(Margins::Matrices(
                s.iter()
                    .map(|a| {
                        a.mul_vec_unchecked(v)
                            .iter()
                            .zip(v)
                            .map(|(y, x)| sign * (y - rho * x))
                            .fold(f64::INFINITY, f64::min)
                    })
                    .collect(),
            ))
        }
    }
}

/// Checks whether `candidate` attains the extremal spectral radius of the
/// set, returning a certificate or the first violating row/member.
pub fn certify_extremal(
    target: CertTarget<'_>,
    candidate: &Matrix,
    direction: Direction,
    cert_tol: f64,
) -> Result<Certification> {
    if !candidate.is_positive() {
        return Err(Error::NotPositive(
            "candidate must be strictly positive".into(),
        ));
    }
    let member = match target {
        CertTarget::Iru(s) => {
            let tol = crate::sets::default_dedup_tol(candidate.max_abs());
            s.choice_of(candidate, tol).is_some()
        }
        CertTarget::Explicit(s) => s.position_of(candidate, s.default_dedup_tol()).is_some(),
    };
    if !member {
        return Err(Error::NotMember);
    }
    let perron = perron_vector(candidate, 1e-13)?;
    if perron.residual > cert_tol {
        return Err(Error::InvalidArgument(format!(
            "Perron residual {} exceeds certificate tolerance {cert_tol}",
            perron.residual
        )));
    }
    let margins = compute_margins(target, &perron.eigenvector, perron.rho, direction)?;
    Ok(match margins.first_violation(cert_tol) {
        Some((location, margin)) => Certification::Rejected(Rejection {
            location,
            margin,
            candidate_rho: perron.rho,
        }),
        None => Certification::Certified(ExtremalCertificate {
            direction,
            extremal_matrix: candidate.clone(),
            perron,
            margins,
            cert_tol,
        }),
    })
}
