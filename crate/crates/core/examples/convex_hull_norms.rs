//! Convex hulls can lower the spectral radius below `ρ_min` (the diagonal
//! pair below), but products from the hull keep their ℓ₁ norm above
//! `(ρ̌ₙ)ⁿ / N`.

use hourglass::linalg::spectral_radius;
use hourglass::spectral::conv_lsr_check;
use hourglass::{ExplicitSet, IruSet, Matrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let b = ExplicitSet::new(vec![
        Matrix::from_rows(&[[2.0, 0.0], [0.0, 0.0]])?,
        Matrix::from_rows(&[[0.0, 0.0], [0.0, 2.0]])?,
    ])?;
    let mid = b.convex_combination(&[0.5, 0.5])?;
    println!(
        "rho((B1+B2)/2) = {:.3} < rho_min = 2, while its norm {:.3} >= 2/2",
        spectral_radius(&mid)?,
        mid.l1_operator_norm()
    );
    let r = conv_lsr_check(&b, 1, 200, 3, 1e-9)?;
    println!(
        "B, n = 1: {:?}, smallest sampled norm {:.4} vs bound {:.4}",
        r.status, r.min_norm, r.bound_power
    );

    let iru = IruSet::from_rows(vec![
        vec![vec![0.3, 1.2], vec![1.0, 0.4]],
        vec![vec![0.8, 0.8], vec![0.1, 1.5]],
    ])?;
    let r = conv_lsr_check(&iru.enumerate(100)?, 3, 200, 11, 1e-9)?;
    println!(
        "IRU, n = 3: {:?}, min norm {:.4}, power-form bound {:.4}, literal bound {:.4}",
        r.status, r.min_norm, r.bound_power, r.bound_literal
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
