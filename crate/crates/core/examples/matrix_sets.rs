//! IRU sets, ordered chains, Minkowski operations, ε-lifts and the
//! Hausdorff distance between two finite sets.

use hourglass::sets::{
    hausdorff_distance, iru_minkowski_sum, minkowski_product, OrderedChain, SetNorm,
};
use hourglass::{IruSet, Matrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // row 0 picks one of two rows, row 1 one of three
    let a = IruSet::from_rows(vec![
        vec![vec![1.0, 0.0], vec![0.5, 0.5]],
        vec![vec![0.0, 1.0], vec![0.2, 0.8], vec![1.0, 1.0]],
    ])?;
    let members = a.enumerate(1_000)?;
    println!(
        "|A| = {} members (cardinality {})",
        members.len(),
        a.cardinality()
    );

    // sums of IRU sets stay IRU: row sets add pointwise
    let sum = iru_minkowski_sum(&a, &a)?;
    println!(
        "A + A is an IRU set with row-set sizes {:?}",
        sum.row_sets().iter().map(|r| r.len()).collect::<Vec<_>>()
    );

    // products of IRU sets are generally not IRU, so they expand
    let prod = minkowski_product(&members, &members, members.default_dedup_tol())?;
    println!("AA has {} distinct members", prod.len());

    let lifted = a.epsilon_lift(1e-3)?;
    println!("epsilon lift is positive: {}", lifted.is_positive());

    let chain = OrderedChain::new(vec![
        Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]])?,
        Matrix::from_rows(&[[0.5, 1.0], [1.0, 0.5]])?,
        Matrix::from_rows(&[[1.0, 1.5], [1.0, 1.0]])?,
    ])?;
    let lifted_chain = chain.epsilon_lift(1e-2)?;
    let d = hausdorff_distance(
        &chain.to_explicit(),
        &lifted_chain.to_explicit(),
        SetNorm::EntrywiseMax,
    )?;
    println!(
        "Hausdorff distance chain -> lifted chain: {:.3e} (3 eps)",
        d.distance
    );
    assert!((d.distance - 3e-2).abs() < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
