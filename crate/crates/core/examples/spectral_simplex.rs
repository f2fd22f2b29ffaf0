//! Greedy row swaps driven by the Perron vector, compared against brute
//! force over all row choices, plus the ε-lift route for a 0/1 set.

use hourglass::spectral::{rho_extremal_exhaustive, spectral_simplex};
use hourglass::{Direction, IruSet};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let s = IruSet::from_rows(vec![
        vec![
            vec![0.4, 1.9, 0.3],
            vec![1.2, 0.2, 0.9],
            vec![0.5, 0.5, 0.5],
        ],
        vec![vec![1.7, 0.1, 0.6], vec![0.3, 0.3, 1.8]],
        vec![
            vec![0.9, 0.9, 0.2],
            vec![0.2, 1.4, 1.1],
            vec![1.0, 0.1, 0.1],
        ],
    ])?;
    let members = s.enumerate(1_000)?;
    for direction in [Direction::Max, Direction::Min] {
        let trace = spectral_simplex(&s, direction, 1e-10, 100)?;
        let exact = rho_extremal_exhaustive(&members, direction)?;
        println!(
            "{direction}: {} swaps, rho = {:.12} (exhaustive {:.12}), certified {}",
            trace.iterations(),
            trace.rho(),
            exact.value,
            trace
                .certification
                .as_ref()
                .is_some_and(|c| c.is_certified())
        );
        for step in &trace.steps {
            println!("    rows {:?}  rho {:.12}", step.choice, step.rho);
        }
    }

    // 0/1 rows are on the boundary; lift them explicitly and watch the choice settle
    let binary = IruSet::from_rows(vec![
        vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    ])?;
    for eps in [1e-2, 1e-3, 1e-4] {
        let t = spectral_simplex(&binary.epsilon_lift(eps)?, Direction::Min, 1e-10, 100)?;
        println!(
            "eps {eps:.0e}: rho_min = {:.8}, rows {:?}",
            t.rho(),
            t.terminal().choice
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
