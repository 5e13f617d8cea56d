//! Ordinary and total least squares on small dense problems.
//!
//! * [`ols`]: simple regression, normal equations, QR and SVD solves.
//! * [`geometry`]: orthogonal-distance line and hyperplane fits.
//! * [`system`]: TLS for an overdetermined system `A x ≈ b`.
//! * [`extensions`]: several right-hand sides at once, and frozen columns.
//! * [`oracles`]: naive brute-force checkers used by the test suites.
//! * [`cli`]: CSV ingestion and the JSON/text fit report behind the `fit` binary.

pub mod cli;
pub mod error;
pub mod extensions;
pub mod geometry;
pub mod linalg;
pub mod ols;
pub mod oracles;
pub mod system;

pub use error::{FitError, Result};
pub use extensions::{solve_tls_fixed, solve_tls_multi, FixedColsSolution, MultiRhsSolution};
pub use geometry::{
    center_matrix, centroid, fit_hyperplane_tls, point_hyperplane_distance, HyperplaneFit,
    PointCloud,
};
pub use linalg::{Matrix, SvdResult, Vector};
pub use ols::{mean_1d, simple_regression, solve_ols, OlsMethod, OlsSolution};
pub use system::{augment, solve_tls_system, tls_objective, TlsSystemSolution};

/// Relative gap `σ_k − σ_{k+1} > GAP_TOL·max(σ₁, 1)` below which two singular
/// values are considered equal and the minimizer is reported as non-unique.
pub const GAP_TOL: f64 = 1e-10;

/// Absolute threshold on a unit vector's component: at or below it the
/// component counts as zero.
pub const COMPONENT_TOL: f64 = 1e-10;

pub(crate) fn separated(sigma: &[f64], k: usize) -> bool {
    // k is the 1-based index of the last retained singular value
    if k == 0 || k >= sigma.len() {
        return true;
    }
    let scale = sigma[0].max(1.0);
    sigma[k - 1] - sigma[k] > GAP_TOL * scale
}
