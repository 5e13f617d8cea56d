use super::matrix::{dot, norm2, Matrix, Vector};
use crate::error::{dim_err, Result};

/// Full QR factorization `A = Q·R` with `Q` square orthogonal and `R` upper
/// trapezoidal with a nonnegative diagonal.
#[derive(Debug, Clone)]
pub struct QrResult {
    pub q: Matrix,
    pub r_upper: Matrix,
}

/// Householder QR of a matrix with at least as many rows as columns.
pub fn householder_qr(a: &Matrix) -> Result<QrResult> {
    let (m, n) = a.shape();
    if m < n {
        return dim_err(format!("QR needs rows >= cols, got {m}x{n}"));
    }
    let mut r = a.clone();
    let mut q = Matrix::identity(m);

    for k in 0..n.min(m.saturating_sub(1)) {
        let x = &r.column(k)[k..];
        let alpha = norm2(x);
        if alpha == 0.0 {
            continue;
        }
        // v = x + sign(x0)·‖x‖·e1, so the reflected pivot is -sign(x0)·‖x‖
        let mut v = x.to_vec();
        let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
        v[0] += sign * alpha;
        let vnorm2 = dot(&v, &v);
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..n {
            let col = &mut r.column_mut(j)[k..];
            let f = 2.0 * dot(&v, col) / vnorm2;
            for (c, vi) in col.iter_mut().zip(&v) {
                *c -= f * vi;
            }
        }
        // Q ← Q·H, H acting on rows/cols k..m
        for i in 0..m {
            let mut s = 0.0;
            for (t, vi) in v.iter().enumerate() {
                s += q.get(i, k + t) * vi;
            }
            let f = 2.0 * s / vnorm2;
            for (t, vi) in v.iter().enumerate() {
                q.set(i, k + t, q.get(i, k + t) - f * vi);
            }
        }
        for i in k + 1..m {
            r.set(i, k, 0.0);
        }
    }

    for k in 0..n {
        if r.get(k, k) < 0.0 {
            for j in k..n {
                r.set(k, j, -r.get(k, j));
            }
            for i in 0..m {
                q.set(i, k, -q.get(i, k));
            }
        }
    }

    Ok(QrResult { q, r_upper: r })
}

impl QrResult {
    /// Leading `n × n` triangle of `R`.
    pub fn r_square(&self) -> Matrix {
        let n = self.r_upper.cols();
        self.r_upper.block(0..n, 0..n)
    }
}

/// Solves `R x = y` for upper-triangular square `R`. Returns `None` on an exact
/// zero pivot.
pub(crate) fn solve_upper(r: &Matrix, y: &[f64]) -> Option<Vec<f64>> {
    let n = r.cols();
    debug_assert_eq!(r.rows(), n);
    let mut x = y[..n].to_vec();
    for i in (0..n).rev() {
        let mut s = x[i];
        for (j, xj) in x.iter().enumerate().skip(i + 1) {
            s -= r.get(i, j) * xj;
        }
        let d = r.get(i, i);
        if d == 0.0 {
            return None;
        }
        x[i] = s / d;
    }
    Some(x)
}

/// Least squares solve via QR: `min ‖A c − y‖` for full-column-rank `A`.
pub(crate) fn qr_solve(qr: &QrResult, y: &Vector) -> Option<Vec<f64>> {
    let qty = qr.q.tr_mul_vec(y).ok()?;
    solve_upper(&qr.r_square(), qty.as_slice())
}
