//! Certifying that a member attains the extremal spectral radius: its
//! Perron vector `v` must satisfy `a·v <= ρ v_i` (max) for every admissible
//! row `a` at every position `i`.

use hourglass::alternative::{certify_extremal, default_cert_tol, CertTarget, Certification};
use hourglass::spectral::rho_extremal_exhaustive;
use hourglass::{Direction, IruSet};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let s = IruSet::from_rows(vec![
        vec![vec![1.0, 2.0], vec![0.5, 0.5], vec![1.5, 0.2]],
        vec![vec![3.0, 1.0], vec![1.0, 1.0]],
    ])?;
    let members = s.enumerate(1_000)?;
    for direction in [Direction::Min, Direction::Max] {
        let ext = rho_extremal_exhaustive(&members, direction)?;
        let best = &members.matrices()[ext.index];
        let tol = default_cert_tol(ext.value);
        match certify_extremal(CertTarget::Iru(&s), best, direction, tol)? {
            Certification::Certified(c) => {
                println!(
                    "rho_{direction} = {:.10} certified; guaranteed bound {:.10}, {} row checks",
                    c.rho(),
                    c.guaranteed_bound(),
                    s.row_sets().iter().map(|r| r.len()).sum::<usize>()
                );
                assert!(c.reverify(CertTarget::Iru(&s))?);
            }
            Certification::Rejected(r) => panic!("extremal member rejected: {r:?}"),
        }
        // any other member is rejected with a concrete violating row
        let other = members
            .iter()
            .find(|m| *m != best)
            .expect("more than one member");
        if let Certification::Rejected(r) =
            certify_extremal(CertTarget::Iru(&s), other, direction, tol)?
        {
            println!(
                "  a non-extremal member fails at {:?} (margin {:.3e})",
                r.location, r.margin
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
