//! Total least squares for an overdetermined system `A x ≈ b`.
//!
//! The rows of the augmented matrix `(A | −b)` are treated as points in
//! `Rⁿ⁺¹`, and the solution `ĉ = (c; 1)` is the normal of the subspace nearest
//! to them. It is read off the right singular vector of the smallest singular
//! value by scaling its last component to one, which fails when that component
//! vanishes.

use crate::error::{dim_err, FitError, Result};
use crate::linalg::{jacobi_svd, truncate_rank, Matrix, Vector};
use crate::{separated, COMPONENT_TOL};

#[derive(Debug, Clone)]
pub struct TlsSystemSolution {
    pub coefficients: Vector,
    /// `E = (F | −g)`, the rank-n truncation of `(A | −b)`.
    pub nearest_system: Matrix,
    /// Singular values of `(A | −b)`, descending.
    pub sigma: Vector,
    pub unique: bool,
    /// `σₙ₊₁ = ‖(A | −b) − E‖_F`
    pub tls_residual: f64,
    /// Right singular vector for `σₙ₊₁`.
    pub null_vector: Vector,
}

impl TlsSystemSolution {
    /// `F`, the first n columns of the nearest system.
    pub fn f(&self) -> Matrix {
        let (m, n1) = self.nearest_system.shape();
        self.nearest_system.block(0..m, 0..n1 - 1)
    }

    /// `g`, the negated last column of the nearest system.
    pub fn g(&self) -> Vector {
        let n1 = self.nearest_system.cols();
        self.nearest_system.column_vector(n1 - 1).scale(-1.0)
    }
}

/// `(A | −b)`
pub fn augment(a: &Matrix, b: &Vector) -> Result<Matrix> {
    if b.len() != a.rows() {
        return dim_err(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        ));
    }
    a.hstack(&Matrix::from_vector(&b.scale(-1.0)))
}

pub fn solve_tls_system(a: &Matrix, b: &Vector) -> Result<TlsSystemSolution> {
    let (m, n) = a.shape();
    if m < n + 1 {
        return dim_err(format!("TLS needs more equations than unknowns, got {m}x{n}"));
    }
    let aug = augment(a, b)?;
    let svd = jacobi_svd(&aug)?;
    let v = svd.v.column_vector(n);
    let last = v[n];
    if last.abs() <= COMPONENT_TOL {
        return Err(FitError::NoTlsSolution {
            null_vector: v,
            sigma: svd.sigma,
        });
    }
    let coefficients = Vector::new(v.as_slice()[..n].iter().map(|x| x / last).collect())?;
    let nearest_system = truncate_rank(&svd, n)?;
    let unique = separated(svd.sigma.as_slice(), n);
    let tls_residual = svd.sigma[n];
    Ok(TlsSystemSolution {
        coefficients,
        nearest_system,
        sigma: svd.sigma,
        unique,
        tls_residual,
        null_vector: v,
    })
}

/// Sum of squared orthogonal distances of the rows of `(A | −b)` to the
/// subspace `ĉ⊥`, `‖(A | −b) ĉ‖² / ‖ĉ‖²` with `ĉ = (c; 1)`.
pub fn tls_objective(a: &Matrix, b: &Vector, c: &Vector) -> Result<f64> {
    if c.len() != a.cols() {
        return dim_err(format!(
            "coefficient vector has length {}, expected {}",
            c.len(),
            a.cols()
        ));
    }
    if b.len() != a.rows() {
        return dim_err(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        ));
    }
    let r = a.mul_vec(c)?.sub(b)?;
    Ok(r.dot(&r) / (1.0 + c.dot(c)))
}
