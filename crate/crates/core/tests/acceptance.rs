//! Exit gate: one PASS/FAIL line per acceptance criterion.
//!
//! Run with `cargo test --release --test acceptance -- --nocapture` to see
//! the lines; the test fails if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use hourglass::alternative::{
    hourglass_iru, hourglass_probe_explicit, hourglass_scan_explicit, Branch, ProbeStatus,
};
use hourglass::generate::{gen_instance, GenKind, GenParams};
use hourglass::linalg::{
    spectral_radius_gelfand, spectral_radius_power, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use hourglass::spectral::{
    conv_lsr_check, finiteness_verify, rho_extremal_exhaustive, spectral_simplex, CheckStatus,
    FinitenessOptions,
};
use hourglass::{Direction, ExplicitSet, IruSet, Matrix, SetExpr};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The 50 instances shared by criteria 2 and 3.
fn bnp_instances() -> Vec<IruSet> {
    let mut rng = rng(2024);
    (0..50)
        .map(|_| {
            let n = rng.random_range(2..=3);
            positive_iru(&mut rng, n, 3, 0.1, 2.0)
        })
        .collect()
}

fn c1_examples() -> Outcome {
    let rho = |m: &Matrix| {
        spectral_radius_power(m, DEFAULT_TOL, DEFAULT_MAX_ITER).map_err(|e| e.to_string())
    };
    let mid = |s: &ExplicitSet| s.convex_combination(&[0.5, 0.5]).map_err(|e| e.to_string());
    let (a, b) = (example_a(), example_b());
    let expected = [
        (rho(&a.matrices()[0])?, 0.0, "rho(A1)"),
        (rho(&a.matrices()[1])?, 0.0, "rho(A2)"),
        (rho(&mid(&a)?)?, 1.0, "rho((A1+A2)/2)"),
        (rho(&b.matrices()[0])?, 2.0, "rho(B1)"),
        (rho(&b.matrices()[1])?, 2.0, "rho(B2)"),
        (rho(&mid(&b)?)?, 1.0, "rho((B1+B2)/2)"),
    ];
    let mut worst: f64 = 0.0;
    for (got, want, name) in expected {
        ensure((got - want).abs() <= 1e-9, || {
            format!("{name} = {got}, expected {want}")
        })?;
        worst = worst.max((got - want).abs());
    }
    let rmax = rho_extremal_exhaustive(&a, Direction::Max)
        .map_err(|e| e.to_string())?
        .value;
    let rmin = rho_extremal_exhaustive(&b, Direction::Min)
        .map_err(|e| e.to_string())?
        .value;
    ensure(rmax.abs() <= 1e-9 && (rmin - 2.0).abs() <= 1e-9, || {
        format!("rho_max(A) = {rmax}, rho_min(B) = {rmin}")
    })?;
    Ok(format!(
        "6 radii and both set extrema, max error {worst:.1e}"
    ))
}

fn c2_bnp() -> Outcome {
    let opts = FinitenessOptions {
        n_max: 4,
        sandwich_samples: 5,
        size_guard: 1_000_000,
        ..FinitenessOptions::default()
    };
    let mut checks = 0;
    for (i, s) in bnp_instances().iter().enumerate() {
        let r = finiteness_verify(&SetExpr::from(s.clone()), &opts)
            .map_err(|e| format!("instance {i}: {e}"))?;
        ensure(r.passed(), || format!("instance {i}: {:?}", r.failure))?;
        let plain: Vec<usize> = r
            .checks
            .iter()
            .filter(|c| !c.sandwich)
            .map(|c| c.n)
            .collect();
        let sandwich: Vec<usize> = r
            .checks
            .iter()
            .filter(|c| c.sandwich)
            .map(|c| c.n)
            .collect();
        ensure(plain == [1, 2, 3, 4] && sandwich == [1, 2, 3], || {
            format!("instance {i}: checked n = {plain:?}, sandwich n = {sandwich:?}")
        })?;
        // independent check of the reported extrema against a direct scan
        let members = s.enumerate(1000).map_err(|e| e.to_string())?;
        let lo = rho_extremal_exhaustive(&members, Direction::Min)
            .map_err(|e| e.to_string())?
            .value;
        let hi = rho_extremal_exhaustive(&members, Direction::Max)
            .map_err(|e| e.to_string())?
            .value;
        for c in &r.checks {
            let tol = c.n as f64 * 1e-7 * hi.max(1.0);
            if !c.sandwich {
                ensure(
                    (c.rho_check_n - lo).abs() <= tol && (c.rho_hat_n - hi).abs() <= tol,
                    || {
                        format!(
                            "instance {i}, n = {}: [{}, {}] vs [{lo}, {hi}]",
                            c.n, c.rho_check_n, c.rho_hat_n
                        )
                    },
                )?;
            }
        }
        checks += r.checks.len();
    }
    Ok(format!("50 instances, {checks} word checks"))
}

fn c3_simplex() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut iterations = 0;
    for (i, s) in bnp_instances().iter().enumerate() {
        let members = s.enumerate(1000).map_err(|e| e.to_string())?;
        for dir in [Direction::Min, Direction::Max] {
            let t =
                spectral_simplex(s, dir, 1e-10, 1000).map_err(|e| format!("instance {i}: {e}"))?;
            let exact = rho_extremal_exhaustive(&members, dir)
                .map_err(|e| e.to_string())?
                .value;
            let err = (t.rho() - exact).abs();
            ensure(t.converged && err <= 1e-8, || {
                format!(
                    "instance {i} {dir}: simplex {} vs exhaustive {exact}",
                    t.rho()
                )
            })?;
            ensure(t.is_strictly_monotone(), || {
                format!("instance {i} {dir}: trace not strictly monotone")
            })?;
            worst = worst.max(err);
            iterations += t.iterations();
        }
    }
    Ok(format!(
        "100 runs, {iterations} swaps in total, max error {worst:.1e}"
    ))
}

fn c4_expressions() -> Outcome {
    let opts = FinitenessOptions {
        n_max: 3,
        size_guard: 20_000_000,
        ..FinitenessOptions::default()
    };
    let mut largest = 0;
    for seed in 0..20 {
        let p = GenParams {
            kind: GenKind::Expr,
            n: 2,
            depth: 3,
            max_size: 200,
            seed,
            ..GenParams::default()
        };
        let e = gen_instance(&p).map_err(|e| e.to_string())?;
        let members = e
            .expand(200, None)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        largest = largest.max(members.len());
        let probe =
            hourglass_probe_explicit(&members, 500, seed, None).map_err(|e| e.to_string())?;
        ensure(probe.status == ProbeStatus::Pass, || {
            format!("seed {seed}: {} probe violations", probe.violations.len())
        })?;
        let r = finiteness_verify(&e, &opts).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(r.passed(), || format!("seed {seed}: {:?}", r.failure))?;
    }
    Ok(format!("20 expressions, up to {largest} matrices each"))
}

fn c5_hourglass() -> Outcome {
    let mut rng = rng(5);
    let mut witnesses = 0;
    for trial in 0..1000 {
        let n = rng.random_range(2..=3);
        let s = positive_iru(&mut rng, n, 3, 0.1, 2.0);
        let choice: Vec<usize> = s
            .row_sets()
            .iter()
            .map(|r| rng.random_range(0..r.len()))
            .collect();
        let u: Vec<f64> = (0..n)
            .map(|_| 10f64.powf(rng.random_range(-1.0..=1.0)))
            .collect();
        let members = s.enumerate(1000).map_err(|e| e.to_string())?;
        let tilde = s.matrix(&choice).map_err(|e| e.to_string())?;
        let idx = members
            .position_of(&tilde, 0.0)
            .ok_or("tilde is not a member")?;
        for branch in [Branch::H1, Branch::H2] {
            let fast = hourglass_iru(&s, &choice, &u, branch, None).map_err(|e| e.to_string())?;
            let slow = hourglass_scan_explicit(&members, idx, &u, branch, Some(fast.strict_tol))
                .map_err(|e| e.to_string())?;
            ensure(fast.verdict == slow.verdict, || {
                format!(
                    "trial {trial} {branch:?}: IRU {:?}, scan {:?}",
                    fast.verdict, slow.verdict
                )
            })?;
            ensure(contract_holds(&members, &tilde, &u, &fast), || {
                format!("trial {trial} {branch:?}: IRU outcome breaks its contract")
            })?;
            ensure(contract_holds(&members, &tilde, &u, &slow), || {
                format!("trial {trial} {branch:?}: scan outcome breaks its contract")
            })?;
            witnesses += usize::from(fast.witness_matrix.is_some());
        }
    }
    Ok(format!(
        "1000 points, 2000 decisions, {witnesses} witnesses"
    ))
}

fn c6_conv() -> Outcome {
    let mut rng = rng(6);
    let mut samples = 0;
    for set in 0..10 {
        let dim = rng.random_range(1..=3);
        let count = rng.random_range(1..=4);
        let s = nonneg_set(&mut rng, dim, count, 0.2);
        for n in 1..=3 {
            let r =
                conv_lsr_check(&s, n, 200, set * 10 + n as u64, 1e-9).map_err(|e| e.to_string())?;
            ensure(
                r.norm_failures.is_empty() && r.srbound_failures.is_empty(),
                || {
                    format!(
                        "set {set}, n = {n}: {} norm and {} radius-bound failures",
                        r.norm_failures.len(),
                        r.srbound_failures.len()
                    )
                },
            )?;
            ensure(r.status == CheckStatus::Pass, || {
                format!("set {set}, n = {n}: status FAIL")
            })?;
            samples += r.samples;
        }
    }
    Ok(format!(
        "10 sets, {samples} sampled products, zero failures"
    ))
}

fn c7_negative_control() -> Outcome {
    let a = SetExpr::from(example_a());
    let r = finiteness_verify(&a, &FinitenessOptions::default()).map_err(|e| e.to_string())?;
    let f = r.failure.as_ref().ok_or("finiteness passed on {A1, A2}")?;
    ensure(
        f.n == 2 && (f.value - 2.0).abs() <= 1e-9 && r.rho_max.value.abs() <= 1e-12,
        || format!("unexpected failure {f:?}"),
    )?;
    // hand product: A1·A2 = diag(4, 0), so its square-root radius is 2
    let hand = example_a();
    let (a1, a2) = (&hand.matrices()[0], &hand.matrices()[1]);
    ensure(
        a1.matmul(a2).unwrap() == Matrix::diagonal(&[4.0, 0.0]),
        || "A1 A2 != diag(4, 0)".into(),
    )?;

    let mut rng = rng(7);
    for attempt in 0..1000 {
        let pair = nonneg_set(&mut rng, 2, 2, 0.0);
        if !pair.is_positive() || pair.len() != 2 {
            continue;
        }
        let probe =
            hourglass_probe_explicit(&pair, 100, attempt, None).map_err(|e| e.to_string())?;
        if probe.status != ProbeStatus::Violation {
            continue;
        }
        let r = finiteness_verify(&SetExpr::from(pair), &FinitenessOptions::default())
            .map_err(|e| e.to_string())?;
        if let Some(f) = r.failure {
            return Ok(format!(
                "{{A1, A2}} fails at n = 2; random positive pair #{attempt} violates the probe and fails at n = {}",
                f.n
            ));
        }
    }
    Err("no probe-violating positive pair failed finiteness in 1000 draws".into())
}

fn c8_kernels() -> Outcome {
    let mut rng = rng(8);
    let (mut worst_pg, mut worst_shift): (f64, f64) = (0.0, 0.0);
    for i in 0..500 {
        let n = rng.random_range(1..=8);
        let m = nonneg_matrix(&mut rng, n, 0.3);
        let p =
            spectral_radius_power(&m, DEFAULT_TOL, DEFAULT_MAX_ITER).map_err(|e| e.to_string())?;
        let g = spectral_radius_gelfand(&m, DEFAULT_TOL).map_err(|e| e.to_string())?;
        ensure((p - g).abs() <= 2e-10, || {
            format!("matrix {i}: power {p}, gelfand {g}")
        })?;
        worst_pg = worst_pg.max((p - g).abs());
        for eps in [1e-3, 1e-1, 1.0] {
            let shifted = m.shift_diagonal(eps).map_err(|e| e.to_string())?;
            let ps = spectral_radius_power(&shifted, DEFAULT_TOL, DEFAULT_MAX_ITER)
                .map_err(|e| e.to_string())?;
            ensure((ps - p - eps).abs() <= 2e-10, || {
                format!("matrix {i}, eps {eps}: {ps} vs {}", p + eps)
            })?;
            worst_shift = worst_shift.max((ps - p - eps).abs());
        }
    }
    Ok(format!(
        "500 matrices, power/gelfand gap {worst_pg:.1e}, shift error {worst_shift:.1e}"
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("example regression", Duration::from_secs(1), c1_examples),
        (
            "bounded finiteness on positive IRU sets",
            Duration::from_secs(60),
            c2_bnp,
        ),
        (
            "spectral simplex vs exhaustive",
            Duration::from_secs(10),
            c3_simplex,
        ),
        (
            "polynomial expressions",
            Duration::from_secs(120),
            c4_expressions,
        ),
        ("hourglass exactness", Duration::MAX, c5_hourglass),
        ("convex hull inequalities", Duration::MAX, c6_conv),
        ("negative control", Duration::MAX, c7_negative_control),
        ("radius kernel cross-validation", Duration::MAX, c8_kernels),
    ];
    let mut failed = Vec::new();
    for (k, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > budget {
            outcome = Err(format!("took {elapsed:.2?}, budget {budget:.0?}"));
        }
        match outcome {
            Ok(detail) => println!(
                "criterion {}: PASS  {name}: {detail} ({elapsed:.2?})",
                k + 1
            ),
            Err(why) => {
                println!("criterion {}: FAIL  {name}: {why} ({elapsed:.2?})", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
