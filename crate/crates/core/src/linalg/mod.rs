//! Dense small-matrix kernels: arithmetic, norms, spectral radii, Perron
//! vectors and eigenvalue bound tests.

mod bound;
mod matrix;
mod radius;

pub use bound::{classify_bound, strict_tolerance, BoundVerdict, Conclusion};
pub use matrix::{dot, l1_operator_norm, mat_mul, max_norm, Matrix};
pub use radius::{
    perron_vector, power_shift, spectral_radius_gelfand, spectral_radius_power, PerronCertificate,
    DEFAULT_MAX_ITER, DEFAULT_TOL, MAX_SQUARINGS,
};

/// Spectral radius of a non-negative matrix with default tolerances.
pub fn spectral_radius(a: &Matrix) -> crate::Result<f64> {
    spectral_radius_power(a, DEFAULT_TOL, DEFAULT_MAX_ITER)
}
