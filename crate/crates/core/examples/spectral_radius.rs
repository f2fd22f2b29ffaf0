//! Spectral radius by two independent methods, the Perron vector and the
//! eigenvalue bound test on the 2x2 example matrices.

use hourglass::linalg::{
    classify_bound, perron_vector, spectral_radius_gelfand, spectral_radius_power,
    DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use hourglass::Matrix;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a1 = Matrix::from_rows(&[[0.0, 2.0], [0.0, 0.0]])?;
    let a2 = Matrix::from_rows(&[[0.0, 0.0], [2.0, 0.0]])?;
    let mid = a1.add(&a2)?.scale(0.5);
    for (name, m) in [("A1", &a1), ("A2", &a2), ("(A1+A2)/2", &mid)] {
        let p = spectral_radius_power(m, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        let g = spectral_radius_gelfand(m, DEFAULT_TOL)?;
        println!("rho({name}) = {p:.12} (power)  {g:.12} (Gelfand)");
    }

    let m = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]])?;
    let cert = perron_vector(&m, 1e-13)?;
    println!(
        "Perron pair: rho = {:.12}, v = {:?}, residual = {:.1e}",
        cert.rho, cert.eigenvector, cert.residual
    );

    // u = (1, 1): Au = (3, 7), so 3 <= rho <= 7
    let verdict = classify_bound(&m, &[1.0, 1.0], 7.0, 1e-12)?;
    println!("bound test at lambda = 7: {:?}", verdict.conclusions());
    assert!(verdict.consistent_with(cert.rho, 1e-12));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
