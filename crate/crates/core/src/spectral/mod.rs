//! Extremal spectral radii, finite-length JSR/LSR approximations and the
//! checks built on them.

mod finiteness;
mod simplex;
mod words;

pub use finiteness::{
    conv_lsr_check, finiteness_verify, CheckStatus, ConvCheckReport, FinitenessFailure,
    FinitenessOptions, FinitenessReport, WordCheck,
};
pub use simplex::{spectral_simplex, SimplexStep, SimplexTrace};
pub use words::{
    jsr_lsr_bounds, rho_n_bruteforce, rho_n_bruteforce_with, rho_n_min_max, scaled_product,
    word_count, word_radius_root, ScaledProduct, SpectralSummary, WordExtremum, WordMode, Words,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::spectral_radius;
use crate::sets::ExplicitSet;
use crate::Direction;

/// Extremal spectral radius of a set and the first member attaining it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub value: f64,
    pub index: usize,
}

/// `ρ_min` or `ρ_max` over the members of a non-negative set.
pub fn rho_extremal_exhaustive(s: &ExplicitSet, direction: Direction) -> Result<Extremum> {
    s.require_square()?;
    for m in s.iter() {
        m.require_nonnegative()?;
    }
    let radii = s
        .matrices()
        .par_iter()
        .map(spectral_radius)
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, &r) in radii.iter().enumerate() {
        if direction.improves(r, radii[best]) {
            best = i;
        }
    }
    Ok(Extremum {
        value: radii[best],
        index: best,
    })
}
