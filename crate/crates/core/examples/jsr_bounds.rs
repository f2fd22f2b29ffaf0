//! Finite-length spectral and norm sequences and the brackets they give for
//! the joint and lower spectral radii. Prints the CSV table at the end.

use hourglass::spectral::{jsr_lsr_bounds, rho_n_bruteforce};
use hourglass::{Direction, ExplicitSet, IruSet, Matrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // no single member has positive spectral radius, yet A1 A2 = diag(4, 0)
    let pair = ExplicitSet::new(vec![
        Matrix::from_rows(&[[0.0, 2.0], [0.0, 0.0]])?,
        Matrix::from_rows(&[[0.0, 0.0], [2.0, 0.0]])?,
    ])?;
    for n in 1..=4 {
        let hi = rho_n_bruteforce(&pair, n, Direction::Max, 100_000)?;
        println!(
            "n = {n}: max rho^(1/n) = {:.6} at word {:?}",
            hi.value, hi.word
        );
    }

    let iru = IruSet::from_rows(vec![
        vec![vec![0.3, 1.2], vec![1.0, 0.4]],
        vec![vec![0.8, 0.8], vec![0.1, 1.5]],
    ])?;
    let summary = jsr_lsr_bounds(&iru.enumerate(100)?, 5, 100_000)?;
    println!(
        "JSR in [{:.10}, {:.10}]",
        summary.jsr_lower, summary.jsr_upper
    );
    println!(
        "LSR in [{:.10}, {:.10}]",
        summary.lsr_lower, summary.lsr_upper
    );
    print!("{}", summary.to_csv());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
