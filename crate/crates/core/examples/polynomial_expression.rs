//! Polynomial expressions over structured sets, here `AA + pA`, expanded
//! into an explicit set and checked against a direct double loop.

use hourglass::linalg::spectral_radius;
use hourglass::{IruSet, SetExpr};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = IruSet::from_rows(vec![
        vec![vec![1.0, 0.2], vec![0.4, 0.9]],
        vec![vec![0.3, 1.1], vec![0.7, 0.7]],
    ])?;
    let p = 0.5;
    let expr = SetExpr::sum(vec![
        SetExpr::product(vec![a.clone().into(), a.clone().into()]),
        SetExpr::scale(p, a.clone().into()),
    ]);
    println!(
        "shape {:?}, depth {}, at most {} members",
        expr.shape()?,
        expr.depth(),
        expr.cardinality_bound()
    );
    let set = expr.expand(100_000, None)?;
    println!("expanded to {} distinct members", set.len());

    let members = a.enumerate(100)?;
    let mut count = 0;
    for x in members.iter() {
        for y in members.iter() {
            for z in members.iter() {
                let m = x.matmul(y)?.add(&z.scale(p))?;
                assert!(set.position_of(&m, set.default_dedup_tol()).is_some());
                count += 1;
            }
        }
    }
    println!("all {count} sums of a product and a scaled member are present");

    let radii: Vec<f64> = set.iter().map(spectral_radius).collect::<Result<_, _>>()?;
    let lo = radii.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = radii.iter().copied().fold(0.0, f64::max);
    println!("rho ranges over [{lo:.6}, {hi:.6}]");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
