//! The finiteness check: on IRU sets and their polynomial combinations the
//! extremal radii are already attained by single members, so
//! `ρ̌ₙ = ρ_min` and `ρ̂ₙ = ρ_max` for every length. The 2x2 pair with
//! zero radii shows the check is not vacuous.

use hourglass::spectral::{finiteness_verify, FinitenessOptions};
use hourglass::{ExplicitSet, IruSet, Matrix, SetExpr};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = IruSet::from_rows(vec![
        vec![vec![1.0, 0.2], vec![0.4, 0.9], vec![0.6, 0.6]],
        vec![vec![0.3, 1.1], vec![0.7, 0.7]],
    ])?;
    let opts = FinitenessOptions::default();
    let r = finiteness_verify(&a.clone().into(), &opts)?;
    println!(
        "IRU set ({} members): {:?}, rho in [{:.8}, {:.8}]",
        r.set_size, r.status, r.rho_min.value, r.rho_max.value
    );

    let expr = SetExpr::sum(vec![
        SetExpr::product(vec![a.clone().into(), a.clone().into()]),
        SetExpr::scale(0.5, a.into()),
    ]);
    // 216 members: length-2 words keep the enumeration small
    let r = finiteness_verify(
        &expr,
        &FinitenessOptions {
            n_max: 2,
            ..opts.clone()
        },
    )?;
    println!("AA + A/2 ({} members): {:?}", r.set_size, r.status);

    let pair = ExplicitSet::new(vec![
        Matrix::from_rows(&[[0.0, 2.0], [0.0, 0.0]])?,
        Matrix::from_rows(&[[0.0, 0.0], [2.0, 0.0]])?,
    ])?;
    let r = finiteness_verify(&pair.into(), &opts)?;
    let f = r.failure.as_ref().expect("the pair fails");
    println!(
        "pair: {:?} at n = {}, word {:?} gives {:.6} but rho_max = {}",
        r.status, f.n, f.word, f.value, f.expected
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
