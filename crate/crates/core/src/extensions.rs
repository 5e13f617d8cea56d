//! Total least squares with several right-hand sides, and with columns of the
//! system matrix held fixed.
//!
//! For `A X ≈ B` with `A` (m×n) and `B` (m×p) the nearest solvable system is
//! the rank-n truncation `E = (F | G)` of `(A | B)`. Partitioning the right
//! singular vectors as
//!
//! ```text
//! V = | V11  V12 |   n rows
//!     | V21  V22 |   p rows
//! ```
//!
//! the columns `(V12; V22)` span the null space of `E`, so `F V12 + G V22 = 0`
//! and `X = −V12 V22⁻¹` solves `F X = G` whenever `V22` is invertible.
//!
//! Frozen columns `A₁` are handled by rotating everything with an orthogonal
//! `U` whose leading columns span `Im(A₁)`: the rows of `Uᵀ(A₂ | B)` below
//! that span form a reduced TLS problem, and the rows above it are matched
//! exactly by `X₁`.

use crate::error::{dim_err, FitError, Result};
use crate::linalg::{
    householder_qr, jacobi_svd, multiply, solve_upper, truncate_rank, Matrix, Vector,
};
use crate::{separated, COMPONENT_TOL};

#[derive(Debug, Clone)]
pub struct MultiRhsSolution {
    /// `X` (n×p)
    pub x: Matrix,
    /// `E = (F | G)`, rank-n truncation of `(A | B)`.
    pub nearest_system: Matrix,
    /// Singular values of `(A | B)`, descending, n + p entries.
    pub sigma: Vector,
    pub unique: bool,
}

impl MultiRhsSolution {
    fn split(&self) -> usize {
        self.x.rows()
    }

    pub fn f(&self) -> Matrix {
        let m = self.nearest_system.rows();
        self.nearest_system.block(0..m, 0..self.split())
    }

    pub fn g(&self) -> Matrix {
        let (m, c) = self.nearest_system.shape();
        self.nearest_system.block(0..m, self.split()..c)
    }

    /// `‖(A | B) − E‖_F²`, the sum of the discarded `σᵢ²`.
    pub fn residual_sq(&self) -> f64 {
        self.sigma.as_slice()[self.split()..]
            .iter()
            .map(|s| s * s)
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct FixedColsSolution {
    /// Coefficients of the frozen columns, `X₁` (j×p).
    pub x1: Matrix,
    /// Coefficients of the free columns, `X₂` (k×p).
    pub x2: Matrix,
    /// `‖A₂ − C‖_F² + ‖B − D‖_F²` at the optimum.
    pub minimized_value: f64,
    /// `false` when `A₁` is rank deficient; `X₁` is then the minimum-norm
    /// representative and any combination of `x1_null_space` columns may be added.
    pub x1_unique: bool,
    /// Whether the reduced TLS problem had a unique solution.
    pub unique: bool,
    /// Numerical rank of `A₁`.
    pub frozen_rank: usize,
    /// Orthonormal basis of the null space of `A₁` (j×(j−rank)).
    pub x1_null_space: Matrix,
    /// Corrected free columns `C`.
    pub perturbed_a2: Matrix,
    /// Corrected right-hand side `D`.
    pub perturbed_b: Matrix,
    /// Singular values of the reduced problem.
    pub sigma: Vector,
}

/// TLS solution of `A X ≈ B` bending `A` towards all right-hand sides at once.
pub fn solve_tls_multi(a: &Matrix, b: &Matrix) -> Result<MultiRhsSolution> {
    let (m, n) = a.shape();
    let p = b.cols();
    if b.rows() != m {
        return dim_err(format!("B has {} rows, A has {m}", b.rows()));
    }
    if p == 0 {
        return dim_err("B needs at least one column");
    }
    if m < n + p {
        return dim_err(format!(
            "need rows >= n + p, got {m} rows for n = {n}, p = {p}"
        ));
    }
    let aug = a.hstack(b)?;
    let svd = jacobi_svd(&aug)?;
    let np = n + p;
    let v12 = svd.v.block(0..n, n..np);
    let v22 = svd.v.block(n..np, n..np);

    let inner = jacobi_svd(&v22)?;
    if inner.sigma_min() <= COMPONENT_TOL {
        let w = inner.v.column_vector(p - 1);
        let null_vector = svd.v.block(0..np, n..np).mul_vec(&w)?;
        return Err(FitError::NoTlsSolution {
            null_vector,
            sigma: svd.sigma,
        });
    }
    // V22⁻¹ = W Σ⁻¹ Uᵀ
    let mut w_sinv = inner.v.clone();
    for j in 0..p {
        let s = inner.sigma[j];
        for x in w_sinv.column_mut(j) {
            *x /= s;
        }
    }
    let v22_inv = multiply(&w_sinv, &inner.u.transpose())?;
    let x = multiply(&v12, &v22_inv)?.scale(-1.0);

    Ok(MultiRhsSolution {
        x,
        nearest_system: truncate_rank(&svd, n)?,
        unique: separated(svd.sigma.as_slice(), n),
        sigma: svd.sigma,
    })
}

/// TLS solution of `A₁ X₁ + A₂ X₂ ≈ B` where only `A₂` and `B` may be corrected.
pub fn solve_tls_fixed(a1: &Matrix, a2: &Matrix, b: &Matrix) -> Result<FixedColsSolution> {
    let m = b.rows();
    let (j, k, p) = (a1.cols(), a2.cols(), b.cols());
    if a1.rows() != m || a2.rows() != m {
        return dim_err(format!(
            "row counts differ: A1 has {}, A2 has {}, B has {m}",
            a1.rows(),
            a2.rows()
        ));
    }
    if p == 0 {
        return dim_err("B needs at least one column");
    }
    if m < j + k + p {
        return dim_err(format!(
            "need rows >= j + k + p, got {m} rows for j = {j}, k = {k}, p = {p}"
        ));
    }

    let frozen_svd = if j > 0 { Some(jacobi_svd(a1)?) } else { None };
    let rank = frozen_svd.as_ref().map_or(0, |s| s.rank());

    enum Frozen {
        Triangular(Matrix),
        Spectral { sigma: Vec<f64>, v1: Matrix },
    }
    let (u, frozen, null_space) = match frozen_svd {
        Some(svd) if rank < j => {
            let v1 = svd.v.block(0..j, 0..rank);
            let v2 = svd.v.block(0..j, rank..j);
            let sigma = svd.sigma.as_slice()[..rank].to_vec();
            (svd.u, Frozen::Spectral { sigma, v1 }, v2)
        }
        _ => {
            let qr = householder_qr(a1)?;
            let r1 = qr.r_square();
            (qr.q, Frozen::Triangular(r1), Matrix::zeros(j, 0))
        }
    };
    let top = rank;

    let ut = u.transpose();
    let ta2 = multiply(&ut, a2)?;
    let tb = multiply(&ut, b)?;
    let a12 = ta2.block(0..top, 0..k);
    let a22 = ta2.block(top..m, 0..k);
    let b1 = tb.block(0..top, 0..p);
    let b2 = tb.block(top..m, 0..p);

    let reduced = solve_tls_multi(&a22, &b2)?;
    let x2 = reduced.x.clone();
    let rhs = b1.sub(&multiply(&a12, &x2)?)?;

    let x1 = match &frozen {
        Frozen::Triangular(r1) => {
            let mut x1 = Matrix::zeros(j, p);
            for c in 0..p {
                let col = solve_upper(r1, rhs.column(c)).ok_or(FitError::RankDeficiency {
                    method: "frozen-column back substitution",
                })?;
                x1.column_mut(c).copy_from_slice(&col);
            }
            x1
        }
        Frozen::Spectral { sigma, v1 } => {
            let mut y = rhs.clone();
            for c in 0..p {
                for (yi, s) in y.column_mut(c).iter_mut().zip(sigma) {
                    *yi /= s;
                }
            }
            multiply(v1, &y)?
        }
    };

    let c2 = reduced.f();
    let d2 = reduced.g();
    let perturbed_a2 = multiply(&u, &a12.vstack(&c2)?)?;
    let perturbed_b = multiply(&u, &b1.vstack(&d2)?)?;

    Ok(FixedColsSolution {
        x1: Matrix::new(j, p, x1.as_slice().to_vec())?,
        x2,
        minimized_value: reduced.residual_sq(),
        x1_unique: rank == j,
        unique: reduced.unique,
        frozen_rank: rank,
        x1_null_space: null_space,
        perturbed_a2,
        perturbed_b,
        sigma: reduced.sigma,
    })
}

/// Direct evaluation of the frozen-column functional for given `C`, `X₁`, `X₂`:
/// `‖A₂ − C‖_F² + ‖B − D‖_F²` with `D = A₁X₁ + C X₂` so that the constraint holds.
pub fn frozen_objective(
    a1: &Matrix,
    a2: &Matrix,
    b: &Matrix,
    c: &Matrix,
    x1: &Matrix,
    x2: &Matrix,
) -> Result<f64> {
    let d = multiply(a1, x1)?.add(&multiply(c, x2)?)?;
    let ea = a2.sub(c)?.frobenius_norm();
    let eb = b.sub(&d)?.frobenius_norm();
    Ok(ea * ea + eb * eb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_two() -> (Matrix, Matrix) {
        (
            Matrix::from_rows(&[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]).unwrap(),
            Matrix::from_rows(&[[1.0], [1.0], [1.0]]).unwrap(),
        )
    }

    #[test]
    fn example_two_multi_has_no_solution() {
        let (a, b) = example_two();
        match solve_tls_multi(&a, &b).unwrap_err() {
            FitError::NoTlsSolution { null_vector, sigma } => {
                assert!((null_vector[1].abs() - 1.0).abs() < 1e-12);
                assert!(null_vector[0].abs() < 1e-12 && null_vector[2].abs() < 1e-12);
                assert_eq!(sigma[2], 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn consistent_system_is_fixed_point() {
        let a = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [2.0, -1.0], [0.5, 3.0]]).unwrap();
        let x0 = Matrix::from_rows(&[[2.0, -1.0], [0.5, 3.0]]).unwrap();
        let b = multiply(&a, &x0).unwrap();
        let s = solve_tls_multi(&a, &b).unwrap();
        assert!(s.x.sub(&x0).unwrap().max_abs() < 1e-8);
        assert!(s.sigma[2] < 1e-12 && s.sigma[3] < 1e-12);
    }

    #[test]
    fn multi_dimension_checks() {
        let a = Matrix::zeros(3, 2);
        assert!(solve_tls_multi(&a, &Matrix::zeros(3, 2)).is_err());
        assert!(solve_tls_multi(&a, &Matrix::zeros(2, 1)).is_err());
        assert!(solve_tls_multi(&a, &Matrix::zeros(3, 0)).is_err());
    }

    #[test]
    fn no_free_columns_is_least_squares() {
        let a1 = Matrix::from_rows(&[[1.0, 0.0], [1.0, 1.0], [1.0, 2.0], [1.0, 3.0]]).unwrap();
        let b = Matrix::from_rows(&[[1.0], [2.0], [2.0], [4.0]]).unwrap();
        let s = solve_tls_fixed(&a1, &Matrix::zeros(4, 0), &b).unwrap();
        // OLS line through these points: y = 0.9 + 0.9 x
        assert!((s.x1[(0, 0)] - 0.9).abs() < 1e-12);
        assert!((s.x1[(1, 0)] - 0.9).abs() < 1e-12);
        assert_eq!(s.x2.shape(), (0, 1));
        assert!(s.x1_unique);
        assert!((s.minimized_value - 0.7).abs() < 1e-12);
    }

    #[test]
    fn fixed_dimension_checks() {
        let a1 = Matrix::zeros(3, 1);
        let a2 = Matrix::zeros(3, 1);
        assert!(solve_tls_fixed(&a1, &a2, &Matrix::zeros(3, 2)).is_err());
        assert!(solve_tls_fixed(&a1, &Matrix::zeros(2, 1), &Matrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn rank_deficient_frozen_block_has_null_space() {
        let a1 = Matrix::from_rows(&[[1.0, 2.0], [1.0, 2.0], [1.0, 2.0], [1.0, 2.0], [1.0, 2.0]]).unwrap();
        let a2 = Matrix::from_rows(&[[0.0], [1.0], [2.0], [3.0], [4.0]]).unwrap();
        let b = Matrix::from_rows(&[[0.1], [2.1], [3.9], [6.2], [7.9]]).unwrap();
        let s = solve_tls_fixed(&a1, &a2, &b).unwrap();
        assert!(!s.x1_unique);
        assert_eq!(s.frozen_rank, 1);
        assert_eq!(s.x1_null_space.shape(), (2, 1));
        // the minimum-norm X1 has no component along the null direction
        let along = s.x1_null_space.column(0)[0] * s.x1[(0, 0)] + s.x1_null_space.column(0)[1] * s.x1[(1, 0)];
        assert!(along.abs() < 1e-12);
    }
}
