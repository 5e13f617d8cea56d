//! One-sided (Hestenes) Jacobi SVD for small dense matrices.
//!
//! Columns of a working copy of `A` are rotated pairwise until every pair is
//! numerically orthogonal; the column norms are then the singular values and
//! the accumulated rotations form `V`. Wide inputs are handled through the
//! transpose.

use super::matrix::{dot, norm2, Matrix, Vector};
use super::qr::householder_qr;
use crate::error::{dim_err, FitError, Result};

/// Pairs with `|aᵢᵀaⱼ| ≤ ORTHO_TOL·‖aᵢ‖‖aⱼ‖` count as orthogonal.
pub const ORTHO_TOL: f64 = 1e-14;
pub const MAX_SWEEPS: usize = 60;
/// Singular values at or below `RANK_TOL·σ₁` are treated as zero.
pub const RANK_TOL: f64 = 1e-12;

/// Full SVD `A = U·diag(σ)·Vᵀ` with `U` (m×m) and `V` (n×n) orthogonal and
/// `σ` (min(m, n) entries) descending.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: Matrix,
    pub sigma: Vector,
    pub v: Matrix,
}

impl SvdResult {
    pub fn rows(&self) -> usize {
        self.u.rows()
    }

    pub fn cols(&self) -> usize {
        self.v.rows()
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.as_slice().first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma.as_slice().last().copied().unwrap_or(0.0)
    }

    /// Absolute cutoff below which a singular value counts as zero.
    pub fn rank_cutoff(&self) -> f64 {
        RANK_TOL * self.sigma_max()
    }

    /// Number of singular values above the relative rank tolerance.
    pub fn rank(&self) -> usize {
        let s1 = self.sigma_max();
        if s1 == 0.0 {
            return 0;
        }
        let cut = self.rank_cutoff();
        self.sigma.iter().filter(|&&s| s > cut).count()
    }

    /// `U·diag(σ)·Vᵀ` rebuilt from the factors.
    pub fn reconstruct(&self) -> Matrix {
        let k = self.sigma.len();
        truncate_rank(self, k).expect("full rank is always in range")
    }
}

/// Computes the SVD of any finite matrix.
pub fn jacobi_svd(a: &Matrix) -> Result<SvdResult> {
    let (m, n) = a.shape();
    if m >= n {
        tall_svd(a)
    } else {
        let t = tall_svd(&a.transpose())?;
        let mut out = SvdResult {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
        // The sign convention is pinned to V, so re-apply it after the swap.
        normalize_signs(&mut out);
        Ok(out)
    }
}

fn tall_svd(a: &Matrix) -> Result<SvdResult> {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = Matrix::identity(n);

    let mut converged = n < 2;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(FitError::Convergence { sweeps });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotated |= rotate_pair(&mut w, &mut v, p, q);
            }
        }
        converged = !rotated;
    }

    let norms: Vec<f64> = (0..n).map(|j| norm2(w.column(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep ascending column index
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let mut v_sorted = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        v_sorted.column_mut(dst).copy_from_slice(v.column(src));
    }

    // Columns whose norm is at roundoff level relative to σ₁ carry no reliable
    // direction; they are rebuilt by completion instead of normalization.
    let floor = sigma.first().copied().unwrap_or(0.0) * f64::EPSILON * (m.max(n) as f64);
    let mut u = Matrix::zeros(m, m);
    let mut filled = 0;
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        if s > floor && s > 0.0 {
            for (ui, wi) in u.column_mut(dst).iter_mut().zip(w.column(src)) {
                *ui = wi / s;
            }
            filled = dst + 1;
        } else {
            break;
        }
    }
    complete_basis(&mut u, filled);

    let mut out = SvdResult {
        u,
        sigma: Vector::from_vec_unchecked(sigma),
        v: v_sorted,
    };
    normalize_signs(&mut out);
    Ok(out)
}

/// One Jacobi rotation on columns `p`, `q`. Returns whether a rotation was applied.
fn rotate_pair(w: &mut Matrix, v: &mut Matrix, p: usize, q: usize) -> bool {
    let (ap, aq) = w.columns_mut(p, q);
    let alpha = dot(ap, ap);
    let beta = dot(aq, aq);
    let gamma = dot(ap, aq);
    if gamma == 0.0 || alpha == 0.0 || beta == 0.0 {
        return false;
    }
    if gamma.abs() <= ORTHO_TOL * alpha.sqrt() * beta.sqrt() {
        return false;
    }
    let zeta = (beta - alpha) / (2.0 * gamma);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;
    apply_rotation(ap, aq, c, s);
    let (vp, vq) = v.columns_mut(p, q);
    apply_rotation(vp, vq, c, s);
    true
}

#[inline]
fn apply_rotation(xp: &mut [f64], xq: &mut [f64], c: f64, s: f64) {
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}

/// Fills columns `filled..m` of `u` with an orthonormal completion of the
/// first `filled` columns, taken from the trailing columns of a full
/// Householder Q of the filled block.
fn complete_basis(u: &mut Matrix, filled: usize) {
    let m = u.rows();
    if filled == m {
        return;
    }
    let q = householder_qr(&u.block(0..m, 0..filled))
        .expect("filled block is tall")
        .q;
    for j in filled..m {
        u.column_mut(j).copy_from_slice(q.column(j));
    }
}

/// In each column of V the entry of largest magnitude (lowest index on ties)
/// is made nonnegative; the matching column of U flips with it.
fn normalize_signs(svd: &mut SvdResult) {
    let k = svd.sigma.len();
    let n = svd.v.cols();
    for j in 0..n {
        let col = svd.v.column(j);
        let mut best = 0;
        for (i, x) in col.iter().enumerate() {
            if x.abs() > col[best].abs() {
                best = i;
            }
        }
        if col[best] < 0.0 {
            for x in svd.v.column_mut(j) {
                *x = -*x;
            }
            // columns of V beyond min(m, n) have no partner in U
            if j < k {
                for x in svd.u.column_mut(j) {
                    *x = -*x;
                }
            }
        }
    }
}

/// Minimum-norm least squares solution `V Σ† Uᵀ y`.
pub fn pinv_apply(svd: &SvdResult, y: &Vector) -> Result<Vector> {
    let m = svd.rows();
    if y.len() != m {
        return dim_err(format!("right-hand side has length {}, expected {m}", y.len()));
    }
    let n = svd.cols();
    let cut = svd.rank_cutoff();
    let mut x = vec![0.0; n];
    for (i, &s) in svd.sigma.iter().enumerate() {
        if s <= cut || s == 0.0 {
            continue;
        }
        let coef = dot(svd.u.column(i), y.as_slice()) / s;
        for (xi, vi) in x.iter_mut().zip(svd.v.column(i)) {
            *xi += coef * vi;
        }
    }
    Ok(Vector::from_vec_unchecked(x))
}

/// Best rank-`k` approximation `Σᵢ₌₁..ₖ σᵢ uᵢ vᵢᵀ`.
pub fn truncate_rank(svd: &SvdResult, k: usize) -> Result<Matrix> {
    let (m, n) = (svd.rows(), svd.cols());
    if k > svd.sigma.len() {
        return dim_err(format!(
            "rank {k} exceeds min(rows, cols) = {}",
            svd.sigma.len()
        ));
    }
    let mut e = Matrix::zeros(m, n);
    for i in 0..k {
        let s = svd.sigma[i];
        let ui = svd.u.column(i);
        for j in 0..n {
            let f = s * svd.v.get(j, i);
            if f == 0.0 {
                continue;
            }
            for (r, &x) in e.column_mut(j).iter_mut().zip(ui) {
                *r += f * x;
            }
        }
    }
    Ok(e)
}
