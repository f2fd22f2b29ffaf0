//! Brute-force enumeration of products `A_{w_n} ⋯ A_{w_1}` over a finite set.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{spectral_radius_power, Matrix, DEFAULT_MAX_ITER};
use crate::sets::ExplicitSet;
use crate::Direction;

/// Tolerance for spectral radii of rescaled products (ℓ₁ norm one).
const SCALED_TOL: f64 = 1e-12;
const CHUNK: usize = 4096;

/// How words of a given length are enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WordMode {
    /// Every word.
    Full,
    /// One representative per rotation class; enough for spectral radii.
    Cyclic,
}

/// Product of a word, rescaled to unit ℓ₁ operator norm.
#[derive(Clone, Debug)]
pub struct ScaledProduct {
    /// `None` when the product is exactly zero.
    pub matrix: Option<Matrix>,
    /// `log ‖A_{w_n} ⋯ A_{w_1}‖₁`.
    pub log_norm: f64,
}

/// Multiplies out `word` (letter `word[0]` acts first), renormalizing
/// after every factor so long products neither overflow nor underflow.
pub fn scaled_product(s: &[Matrix], word: &[usize]) -> ScaledProduct {
    let mut log_norm = 0.0;
    let mut p = s[word[0]].clone();
    let mut norm = p.l1_operator_norm();
    for &k in &word[1..] {
        if norm == 0.0 {
            break;
        }
        p.scale_in_place(1.0 / norm);
        log_norm += norm.ln();
        p = s[k].matmul_unchecked(&p);
        norm = p.l1_operator_norm();
    }
    if norm == 0.0 {
        return ScaledProduct {
            matrix: None,
            log_norm: f64::NEG_INFINITY,
        };
    }
    p.scale_in_place(1.0 / norm);
    log_norm += norm.ln();
    ScaledProduct {
        matrix: Some(p),
        log_norm,
    }
}

/// `ρ(A_{w_n} ⋯ A_{w_1})^{1/n}` for a non-negative set.
pub fn word_radius_root(s: &[Matrix], word: &[usize]) -> Result<f64> {
    let p = scaled_product(s, word);
    radius_root(&p, word.len())
}

fn radius_root(p: &ScaledProduct, n: usize) -> Result<f64> {
    let Some(m) = &p.matrix else { return Ok(0.0) };
    let r = spectral_radius_power(m, SCALED_TOL, DEFAULT_MAX_ITER)?;
    if r <= 0.0 {
        return Ok(0.0);
    }
    Ok(((r.ln() + p.log_norm) / n as f64).exp())
}

fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Number of words visited for an alphabet of size `k` and length `n`.
pub fn word_count(k: usize, n: usize, mode: WordMode) -> u128 {
    let k = k as u128;
    let pow = |e: usize| (0..e).fold(1u128, |acc, _| acc.saturating_mul(k));
    match mode {
        WordMode::Full => pow(n),
        WordMode::Cyclic => {
            if n == 0 {
                return 1;
            }
            let mut total = 0u128;
            for d in 1..=n {
                if n.is_multiple_of(d) {
                    total = total
                        .saturating_add((totient(d as u64) as u128).saturating_mul(pow(n / d)));
                }
            }
            total / n as u128
        }
    }
}

/// Iterator over words of length `n` on `k` letters, lexicographic order.
pub struct Words {
    k: usize,
    n: usize,
    mode: WordMode,
    state: Option<Vec<isize>>,
}

impl Words {
    pub fn new(k: usize, n: usize, mode: WordMode) -> Self {
        assert!(k >= 1 && n >= 1);
        let state = match mode {
            WordMode::Full => Some(vec![0; n]),
            WordMode::Cyclic => Some(vec![-1]),
        };
        Self { k, n, mode, state }
    }
}

impl Iterator for Words {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        match self.mode {
            WordMode::Full => {
                let cur = self.state.take()?;
                let mut succ = cur.clone();
                let mut pos = self.n;
                while pos > 0 {
                    pos -= 1;
                    succ[pos] += 1;
                    if (succ[pos] as usize) < self.k {
                        self.state = Some(succ);
                        break;
                    }
                    succ[pos] = 0;
                }
                Some(cur.into_iter().map(|x| x as usize).collect())
            }
            WordMode::Cyclic => {
                // Duval's generation of Lyndon words of length <= n; those
                // whose length divides n, repeated, are exactly the
                // lexicographically least rotations (necklaces).
                let k = self.k as isize;
                loop {
                    let w = self.state.as_mut()?;
                    if w.is_empty() {
                        self.state = None;
                        return None;
                    }
                    *w.last_mut().unwrap() += 1;
                    let m = w.len();
                    let out = self
                        .n
                        .is_multiple_of(m)
                        .then(|| w.iter().cycle().take(self.n).map(|&x| x as usize).collect());
                    while w.len() < self.n {
                        let x = w[w.len() - m];
                        w.push(x);
                    }
                    while w.last().is_some_and(|&x| x == k - 1) {
                        w.pop();
                    }
                    if out.is_some() {
                        return out;
                    }
                }
            }
        }
    }
}

/// Extremal value over words together with the word attaining it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordExtremum {
    /// `ρ(product)^{1/n}` of the extremal word.
    pub value: f64,
    pub word: Vec<usize>,
}

/// Folds per-word values in enumeration order; the first word attaining the
/// extremum wins.
struct Tournament {
    direction: Direction,
    best: Option<(f64, Vec<usize>)>,
}

impl Tournament {
    fn new(direction: Direction) -> Self {
        Self {
            direction,
            best: None,
        }
    }

    fn offer(&mut self, value: f64, word: &[usize]) {
        let better = match &self.best {
            None => true,
            Some((b, _)) => self.direction.improves(value, *b),
        };
        if better {
            self.best = Some((value, word.to_vec()));
        }
    }

    fn finish(self) -> WordExtremum {
        let (value, word) = self.best.expect("at least one word");
        WordExtremum { value, word }
    }
}

fn require_nonneg_square(s: &ExplicitSet) -> Result<()> {
    s.require_square()?;
    for m in s.iter() {
        m.require_nonnegative()?;
    }
    Ok(())
}

/// Exact `ρ̂ₙ` (max) or `ρ̌ₙ` (min) over all words of length `n`, using one
/// representative per rotation class.
pub fn rho_n_bruteforce(
    s: &ExplicitSet,
    n: usize,
    direction: Direction,
    size_guard: u128,
) -> Result<WordExtremum> {
    rho_n_bruteforce_with(s, n, direction, size_guard, WordMode::Cyclic)
}

pub fn rho_n_bruteforce_with(
    s: &ExplicitSet,
    n: usize,
    direction: Direction,
    size_guard: u128,
    mode: WordMode,
) -> Result<WordExtremum> {
    let [ext] = rho_n_extrema(s, n, &[direction], size_guard, mode)?;
    Ok(ext)
}

/// Minimum and maximum over words of length `n` in one pass.
pub fn rho_n_min_max(
    s: &ExplicitSet,
    n: usize,
    size_guard: u128,
) -> Result<(WordExtremum, WordExtremum)> {
    let [lo, hi] = rho_n_extrema(
        s,
        n,
        &[Direction::Min, Direction::Max],
        size_guard,
        WordMode::Cyclic,
    )?;
    Ok((lo, hi))
}

fn rho_n_extrema<const K: usize>(
    s: &ExplicitSet,
    n: usize,
    directions: &[Direction; K],
    size_guard: u128,
    mode: WordMode,
) -> Result<[WordExtremum; K]> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "word length must be at least 1".into(),
        ));
    }
    require_nonneg_square(s)?;
    let required = word_count(s.len(), n, mode);
    if required > size_guard {
        return Err(Error::GuardExceeded {
            required,
            guard: size_guard,
        });
    }
    let mats = s.matrices();
    let mut tours: Vec<Tournament> = directions.iter().map(|&d| Tournament::new(d)).collect();
    let mut words = Words::new(s.len(), n, mode).peekable();
    while words.peek().is_some() {
        let chunk: Vec<Vec<usize>> = words.by_ref().take(CHUNK).collect();
        let values: Vec<Result<f64>> = chunk
            .par_iter()
            .map(|w| word_radius_root(mats, w))
            .collect();
        for (w, v) in chunk.iter().zip(values) {
            let v = v?;
            for t in &mut tours {
                t.offer(v, w);
            }
        }
    }
    let mut out = tours.into_iter().map(Tournament::finish);
    Ok(std::array::from_fn(|_| out.next().unwrap()))
}

/// Sequences of finite-length spectral and norm quantities together with
/// the brackets they give for the joint and lower spectral radii.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub n_max: usize,
    /// `ρ̂ₙ = max ρ(A_{w_n}⋯A_{w_1})^{1/n}`, index `n − 1`.
    pub rho_hat: Vec<f64>,
    /// `ρ̌ₙ = min ρ(A_{w_n}⋯A_{w_1})^{1/n}`.
    pub rho_check: Vec<f64>,
    pub argmax_words: Vec<Vec<usize>>,
    pub argmin_words: Vec<Vec<usize>>,
    /// `(max ‖A_{w_n}⋯A_{w_1}‖₁)^{1/n}`.
    pub norm_upper: Vec<f64>,
    /// `(min ‖A_{w_n}⋯A_{w_1}‖₁)^{1/n}`.
    pub norm_lower: Vec<f64>,
    /// `(min over words of the smallest row sum)^{1/n}`.
    pub row_sum_lower: Vec<f64>,
    pub jsr_lower: f64,
    pub jsr_upper: f64,
    pub lsr_lower: f64,
    pub lsr_upper: f64,
}

impl SpectralSummary {
    /// CSV with columns `n, rho_hat_n, rho_check_n, norm_upper_n, norm_lower_n`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "n",
            "rho_hat_n",
            "rho_check_n",
            "norm_upper_n",
            "norm_lower_n",
        ])
        .expect("in-memory write");
        for i in 0..self.n_max {
            w.write_record([
                (i + 1).to_string(),
                crate::descriptor::format_number(self.rho_hat[i]),
                crate::descriptor::format_number(self.rho_check[i]),
                crate::descriptor::format_number(self.norm_upper[i]),
                crate::descriptor::format_number(self.norm_lower[i]),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }
}

/// Fills every sequence for `n = 1..=n_max` by full enumeration (norms are
/// not rotation invariant). Brackets: JSR in `[max ρ̂ₙ, min norm_upper]`,
/// LSR in `[max row_sum_lower, min(min ρ̌ₙ, min norm_lower)]`.
pub fn jsr_lsr_bounds(s: &ExplicitSet, n_max: usize, size_guard: u128) -> Result<SpectralSummary> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    require_nonneg_square(s)?;
    let required = word_count(s.len(), n_max, WordMode::Full);
    if required > size_guard {
        return Err(Error::GuardExceeded {
            required,
            guard: size_guard,
        });
    }
    let mats = s.matrices();
    let mut summary = SpectralSummary {
        n_max,
        rho_hat: Vec::new(),
        rho_check: Vec::new(),
        argmax_words: Vec::new(),
        argmin_words: Vec::new(),
        norm_upper: Vec::new(),
        norm_lower: Vec::new(),
        row_sum_lower: Vec::new(),
        jsr_lower: 0.0,
        jsr_upper: f64::INFINITY,
        lsr_lower: 0.0,
        lsr_upper: f64::INFINITY,
    };
    for n in 1..=n_max {
        let mut hi = Tournament::new(Direction::Max);
        let mut lo = Tournament::new(Direction::Min);
        let mut norm_hi = f64::NEG_INFINITY;
        let mut norm_lo = f64::INFINITY;
        let mut rowsum_lo = f64::INFINITY;
        let mut words = Words::new(s.len(), n, WordMode::Full).peekable();
        while words.peek().is_some() {
            let chunk: Vec<Vec<usize>> = words.by_ref().take(CHUNK).collect();
            let values: Vec<Result<(f64, f64, f64)>> = chunk
                .par_iter()
                .map(|w| {
                    let p = scaled_product(mats, w);
                    let rho = radius_root(&p, n)?;
                    let norm = (p.log_norm / n as f64).exp();
                    let rowsum = match &p.matrix {
                        None => 0.0,
                        Some(m) => {
                            let r = (0..m.rows())
                                .map(|i| m.row(i).iter().sum::<f64>())
                                .fold(f64::INFINITY, f64::min);
                            if r > 0.0 {
                                ((r.ln() + p.log_norm) / n as f64).exp()
                            } else {
                                0.0
                            }
                        }
                    };
                    Ok((rho, norm, rowsum))
                })
                .collect();
            for (w, v) in chunk.iter().zip(values) {
                let (rho, norm, rowsum) = v?;
                hi.offer(rho, w);
                lo.offer(rho, w);
                norm_hi = norm_hi.max(norm);
                norm_lo = norm_lo.min(norm);
                rowsum_lo = rowsum_lo.min(rowsum);
            }
        }
        let hi = hi.finish();
        let lo = lo.finish();
        summary.rho_hat.push(hi.value);
        summary.argmax_words.push(hi.word);
        summary.rho_check.push(lo.value);
        summary.argmin_words.push(lo.word);
        summary.norm_upper.push(norm_hi);
        summary.norm_lower.push(norm_lo);
        summary.row_sum_lower.push(rowsum_lo);
    }
    let fold_max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let fold_min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    summary.jsr_lower = fold_max(&summary.rho_hat);
    summary.jsr_upper = fold_min(&summary.norm_upper);
    summary.lsr_lower = fold_max(&summary.row_sum_lower);
    summary.lsr_upper = fold_min(&summary.rho_check).min(fold_min(&summary.norm_lower));
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_a() -> ExplicitSet {
        ExplicitSet::new(vec![
            Matrix::from_rows(&[[0.0, 2.0], [0.0, 0.0]]).unwrap(),
            Matrix::from_rows(&[[0.0, 0.0], [2.0, 0.0]]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn necklace_counts_match_formula() {
        for k in 1..=4 {
            for n in 1..=6 {
                let got = Words::new(k, n, WordMode::Cyclic).count() as u128;
                assert_eq!(got, word_count(k, n, WordMode::Cyclic), "k={k} n={n}");
                let full = Words::new(k, n, WordMode::Full).count() as u128;
                assert_eq!(full, (k as u128).pow(n as u32));
            }
        }
    }

    #[test]
    fn necklaces_cover_every_rotation_class() {
        let (k, n) = (3, 4);
        let canon = |w: &[usize]| {
            (0..n)
                .map(|r| {
                    let mut x = w.to_vec();
                    x.rotate_left(r);
                    x
                })
                .min()
                .unwrap()
        };
        let reps: std::collections::BTreeSet<Vec<usize>> =
            Words::new(k, n, WordMode::Cyclic).collect();
        let classes: std::collections::BTreeSet<Vec<usize>> = Words::new(k, n, WordMode::Full)
            .map(|w| canon(&w))
            .collect();
        assert_eq!(reps, classes);
    }

    #[test]
    fn example_pair_length_two() {
        let s = example_a();
        let hi = rho_n_bruteforce(&s, 2, Direction::Max, 1000).unwrap();
        assert!((hi.value - 2.0).abs() < 1e-10);
        assert_eq!(hi.word, vec![0, 1]);
        let one = rho_n_bruteforce(&s, 1, Direction::Max, 1000).unwrap();
        assert_eq!(one.value, 0.0);
    }

    #[test]
    fn long_products_do_not_overflow() {
        let big = ExplicitSet::singleton(Matrix::filled(8, 8, 50.0));
        let r = rho_n_bruteforce(&big, 300, Direction::Max, 10).unwrap();
        assert!((r.value - 400.0).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn guard_counts_rotation_classes() {
        let s = example_a();
        assert!(rho_n_bruteforce(&s, 10, Direction::Max, 107).is_err());
        assert!(rho_n_bruteforce(&s, 10, Direction::Max, 108).is_ok());
    }

    #[test]
    fn identity_summary_is_flat() {
        let s = ExplicitSet::singleton(Matrix::identity(3));
        let sum = jsr_lsr_bounds(&s, 4, 1000).unwrap();
        for seq in [
            &sum.rho_hat,
            &sum.rho_check,
            &sum.norm_upper,
            &sum.norm_lower,
        ] {
            assert!(seq.iter().all(|&x| (x - 1.0).abs() < 1e-12));
        }
        let csv = sum.to_csv();
        assert!(csv.starts_with("n,rho_hat_n,rho_check_n,norm_upper_n,norm_lower_n\n"));
        assert_eq!(csv.lines().count(), 5);
    }
}
