//! Dense small-matrix kernel: storage, norms, Householder QR, one-sided
//! Jacobi SVD, pseudo-inverse application and rank truncation.

mod matrix;
mod qr;
mod svd;

pub use matrix::{frobenius_norm, multiply, Matrix, Vector};
pub use qr::{householder_qr, QrResult};
pub use svd::{jacobi_svd, pinv_apply, truncate_rank, SvdResult, MAX_SWEEPS, ORTHO_TOL, RANK_TOL};

pub(crate) use qr::{qr_solve, solve_upper};
