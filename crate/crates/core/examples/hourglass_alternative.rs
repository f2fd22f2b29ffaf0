//! The hourglass alternative: for a point `(Ã, u)` either every member maps
//! `u` above `Ãu` or some member maps it below (and mirrored). IRU sets
//! decide this row by row; arbitrary finite sets need a scan, and can fail.

use hourglass::alternative::{hourglass_h1_iru, hourglass_h2_iru, hourglass_probe_explicit};
use hourglass::{ExplicitSet, IruSet, Matrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let s = IruSet::from_rows(vec![
        vec![vec![1.0, 2.0], vec![0.5, 0.5], vec![1.5, 0.2]],
        vec![vec![3.0, 1.0], vec![1.0, 1.0]],
    ])?;
    let u = [1.0, 2.0];
    let h1 = hourglass_h1_iru(&s, &[0, 1], &u, None)?;
    let h2 = hourglass_h2_iru(&s, &[0, 1], &u, None)?;
    println!(
        "H1 at (A[0,1], u): {:?}, witness rows {:?}",
        h1.verdict, h1.witness_choice
    );
    println!(
        "H2 at (A[0,1], u): {:?}, witness rows {:?}",
        h2.verdict, h2.witness_choice
    );

    let probe = hourglass_probe_explicit(&s.enumerate(1_000)?, 500, 7, None)?;
    println!(
        "probe on the IRU enumeration: {:?} in {} trials",
        probe.status, probe.trials
    );

    // two matrices that pull u in opposite directions in each coordinate
    let pair = ExplicitSet::new(vec![
        Matrix::from_rows(&[[2.0, 0.1], [0.1, 0.1]])?,
        Matrix::from_rows(&[[0.1, 0.1], [0.1, 2.0]])?,
    ])?;
    let probe = hourglass_probe_explicit(&pair, 50, 7, None)?;
    println!(
        "probe on an incomparable pair: {:?}, first violation at trial {:?}",
        probe.status,
        probe.violations.first().map(|v| v.trial)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
