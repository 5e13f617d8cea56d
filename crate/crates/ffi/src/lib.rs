//! C ABI over `tlsfit`.
//!
//! Matrices cross the boundary as row-major `const double*` with explicit
//! dimensions. Solvers return a status code and hand back an opaque handle
//! through an out pointer; every handle has a matching `*_free`. Array
//! accessors copy into caller buffers and fail with
//! `TLSFIT_ERR_BUFFER_TOO_SMALL` when `len` is short. After any non-zero
//! status, `tlsfit_last_error_message` describes the failure on the calling
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tlsfit::{FitError, FixedColsSolution, HyperplaneFit, Matrix, MultiRhsSolution, OlsMethod, PointCloud, Vector};

pub const TLSFIT_OK: i32 = 0;
pub const TLSFIT_ERR_NULL_POINTER: i32 = 1;
pub const TLSFIT_ERR_DIMENSION: i32 = 2;
pub const TLSFIT_ERR_NON_FINITE: i32 = 3;
pub const TLSFIT_ERR_CONVERGENCE: i32 = 4;
pub const TLSFIT_ERR_RANK_DEFICIENT: i32 = 5;
pub const TLSFIT_ERR_DEGENERATE: i32 = 6;
pub const TLSFIT_ERR_EMPTY: i32 = 7;
/// The system has no TLS solution. The system handle is still written and
/// exposes the null vector and singular values.
pub const TLSFIT_ERR_NO_TLS_SOLUTION: i32 = 8;
pub const TLSFIT_ERR_BUFFER_TOO_SMALL: i32 = 9;
pub const TLSFIT_ERR_INVALID_ARGUMENT: i32 = 10;
pub const TLSFIT_ERR_PANIC: i32 = 99;

pub const TLSFIT_OLS_NORMAL_EQUATIONS: i32 = 0;
pub const TLSFIT_OLS_QR: i32 = 1;
pub const TLSFIT_OLS_SVD: i32 = 2;
pub const TLSFIT_OLS_CLOSED_FORM: i32 = 3;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &FitError) -> i32 {
    match err {
        FitError::Dimension(_) => TLSFIT_ERR_DIMENSION,
        FitError::NonFinite { .. } => TLSFIT_ERR_NON_FINITE,
        FitError::Convergence { .. } => TLSFIT_ERR_CONVERGENCE,
        FitError::RankDeficiency { .. } => TLSFIT_ERR_RANK_DEFICIENT,
        FitError::DegenerateAbscissa => TLSFIT_ERR_DEGENERATE,
        FitError::EmptyData(_) => TLSFIT_ERR_EMPTY,
        FitError::NoTlsSolution { .. } => TLSFIT_ERR_NO_TLS_SOLUTION,
        FitError::Format { .. } | FitError::Io(_) => TLSFIT_ERR_INVALID_ARGUMENT,
    }
}

fn fail(err: FitError) -> i32 {
    set_error(err.to_string());
    status_of(&err)
}

/// Runs `f`, turning a panic into `TLSFIT_ERR_PANIC`.
fn guard(f: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            TLSFIT_ERR_PANIC
        }
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            set_error(concat!("null pointer: ", stringify!($p)));
            return TLSFIT_ERR_NULL_POINTER;
        })+
    };
}

/// Reads a row-major `rows × cols` block. A null pointer is accepted only for
/// an empty block.
unsafe fn read_matrix(data: *const f64, rows: usize, cols: usize) -> Result<Matrix, i32> {
    let len = rows.checked_mul(cols).ok_or_else(|| {
        set_error("matrix dimensions overflow");
        TLSFIT_ERR_DIMENSION
    })?;
    if len == 0 {
        return Ok(Matrix::zeros(rows, cols));
    }
    if data.is_null() {
        set_error("null matrix pointer");
        return Err(TLSFIT_ERR_NULL_POINTER);
    }
    let slice = std::slice::from_raw_parts(data, len);
    Matrix::from_row_major(rows, cols, slice).map_err(fail)
}

unsafe fn read_vector(data: *const f64, len: usize) -> Result<Vector, i32> {
    let m = read_matrix(data, len, 1)?;
    Ok(m.column_vector(0))
}

unsafe fn copy_out(src: &[f64], out: *mut f64, len: usize) -> i32 {
    if src.is_empty() {
        return TLSFIT_OK;
    }
    if out.is_null() {
        set_error("null output buffer");
        return TLSFIT_ERR_NULL_POINTER;
    }
    if len < src.len() {
        set_error(format!("buffer holds {len} values, {} needed", src.len()));
        return TLSFIT_ERR_BUFFER_TOO_SMALL;
    }
    ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    TLSFIT_OK
}

fn row_major(m: &Matrix) -> Vec<f64> {
    m.to_rows().concat()
}

/// Copies the array selected by `get` out of a live handle.
unsafe fn copy_from<H>(h: *const H, out: *mut f64, len: usize, get: impl FnOnce(&H) -> Vec<f64>) -> i32 {
    guard(|| {
        non_null!(h);
        copy_out(&get(&*h), out, len)
    })
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

unsafe fn free_handle<T>(h: *mut T) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tlsfit_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

// ---------------------------------------------------------------- OLS

/// Least squares `min ‖A c − y‖` with `A` row-major `m × n`. Writes `n`
/// coefficients; `residual_norm` and `rank_deficient` may be null.
///
/// # Safety
/// Pointers must reference buffers of the stated sizes.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_solve_ols(
    a: *const f64,
    m: usize,
    n: usize,
    y: *const f64,
    method: i32,
    coefficients: *mut f64,
    len: usize,
    residual_norm: *mut f64,
    rank_deficient: *mut bool,
) -> i32 {
    guard(|| {
        let method = match method {
            TLSFIT_OLS_NORMAL_EQUATIONS => OlsMethod::NormalEquations,
            TLSFIT_OLS_QR => OlsMethod::Qr,
            TLSFIT_OLS_SVD => OlsMethod::Svd,
            TLSFIT_OLS_CLOSED_FORM => OlsMethod::ClosedForm,
            other => {
                set_error(format!("unknown OLS method {other}"));
                return TLSFIT_ERR_INVALID_ARGUMENT;
            }
        };
        let a = match read_matrix(a, m, n) {
            Ok(a) => a,
            Err(code) => return code,
        };
        let y = match read_vector(y, m) {
            Ok(y) => y,
            Err(code) => return code,
        };
        let sol = match tlsfit::solve_ols(&a, &y, method) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        let code = copy_out(sol.coefficients.as_slice(), coefficients, len);
        if code != TLSFIT_OK {
            return code;
        }
        if !residual_norm.is_null() {
            *residual_norm = sol.residual_norm;
        }
        if !rank_deficient.is_null() {
            *rank_deficient = sol.rank_deficient;
        }
        TLSFIT_OK
    })
}

// ---------------------------------------------------------------- hyperplane

/// Opaque result of a hyperplane fit.
pub struct TlsfitHyperplane {
    fit: HyperplaneFit,
}

/// Fits a hyperplane to `m` points in `n` dimensions, given row-major.
///
/// # Safety
/// `points` must hold `m·n` values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_fit_hyperplane(
    points: *const f64,
    m: usize,
    n: usize,
    out: *mut *mut TlsfitHyperplane,
) -> i32 {
    guard(|| {
        non_null!(out);
        *out = ptr::null_mut();
        let pts = match read_matrix(points, m, n) {
            Ok(p) => p,
            Err(code) => return code,
        };
        let fit = PointCloud::new(pts).and_then(|c| tlsfit::fit_hyperplane_tls(&c));
        match fit {
            Ok(fit) => {
                write_handle(out, TlsfitHyperplane { fit });
                TLSFIT_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Ambient dimension `n`; the length of the normal, centroid and singular values.
///
/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_hyperplane_dim(h: *const TlsfitHyperplane) -> usize {
    h.as_ref().map_or(0, |h| h.fit.normal.len())
}

/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_hyperplane_objective(h: *const TlsfitHyperplane) -> f64 {
    h.as_ref().map_or(f64::NAN, |h| h.fit.objective)
}

/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_hyperplane_unique(h: *const TlsfitHyperplane) -> bool {
    h.as_ref().is_some_and(|h| h.fit.unique)
}

/// Whether the plane can be written as `y = c₀ + Σ cₖ xₖ`.
///
/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_hyperplane_expressible(h: *const TlsfitHyperplane) -> bool {
    h.as_ref().is_some_and(|h| h.fit.expressible)
}

/// Unit normal, `n` values.
///
/// # Safety
/// `h` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_hyperplane_normal(h: *const TlsfitHyperplane, out: *mut f64, len: usize) -> i32 {
    copy_from(h, out, len, |h| h.fit.normal.as_slice().to_vec())
}
/// Centroid of the cloud, `n` values.
///
/// # Safety
/// `h` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_hyperplane_centroid(h: *const TlsfitHyperplane, out: *mut f64, len: usize) -> i32 {
    copy_from(h, out, len, |h| h.fit.centroid.as_slice().to_vec())
}
/// Singular values of the centered cloud, `min(m, n)` values.
///
/// # Safety
/// `h` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_hyperplane_singular_values(h: *const TlsfitHyperplane, out: *mut f64, len: usize) -> i32 {
    copy_from(h, out, len, |h| h.fit.sigma.as_slice().to_vec())
}

/// Explicit coefficients `(c₀, …, c_{n−1})`, `n` values. Fails with
/// `TLSFIT_ERR_DEGENERATE` when the plane is not expressible.
///
/// # Safety
/// `h` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_hyperplane_explicit(h: *const TlsfitHyperplane, out: *mut f64, len: usize) -> i32 {
    guard(|| {
        non_null!(h);
        match &(*h).fit.explicit_coeffs {
            Some(c) => copy_out(c.as_slice(), out, len),
            None => {
                set_error("hyperplane is parallel to the last axis");
                TLSFIT_ERR_DEGENERATE
            }
        }
    })
}

/// # Safety
/// `h` must come from `tlsfit_fit_hyperplane` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_hyperplane_free(h: *mut TlsfitHyperplane) {
    free_handle(h)
}

// ---------------------------------------------------------------- system

/// Opaque result of a single right-hand-side TLS solve. When the solve
/// reported `TLSFIT_ERR_NO_TLS_SOLUTION` only the null vector and singular
/// values are available.
pub struct TlsfitSystem {
    coefficients: Option<Vec<f64>>,
    sigma: Vec<f64>,
    null_vector: Vec<f64>,
    residual: f64,
    unique: bool,
}

/// TLS solution of `A c ≈ b`, `A` row-major `m × n`. On
/// `TLSFIT_ERR_NO_TLS_SOLUTION` the handle is still written.
///
/// # Safety
/// `a` must hold `m·n` values, `b` must hold `m`, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_solve_tls_system(
    a: *const f64,
    m: usize,
    n: usize,
    b: *const f64,
    out: *mut *mut TlsfitSystem,
) -> i32 {
    guard(|| {
        non_null!(out);
        *out = ptr::null_mut();
        let a = match read_matrix(a, m, n) {
            Ok(a) => a,
            Err(code) => return code,
        };
        let b = match read_vector(b, m) {
            Ok(b) => b,
            Err(code) => return code,
        };
        match tlsfit::solve_tls_system(&a, &b) {
            Ok(s) => {
                let handle = TlsfitSystem {
                    coefficients: Some(s.coefficients.into_vec()),
                    sigma: s.sigma.into_vec(),
                    null_vector: s.null_vector.into_vec(),
                    residual: s.tls_residual,
                    unique: s.unique,
                };
                write_handle(out, handle);
                TLSFIT_OK
            }
            Err(FitError::NoTlsSolution { null_vector, sigma }) => {
                set_error("no TLS solution: the null vector has a vanishing last component");
                let residual = sigma.as_slice().last().copied().unwrap_or(0.0);
                let handle = TlsfitSystem {
                    coefficients: None,
                    sigma: sigma.into_vec(),
                    null_vector: null_vector.into_vec(),
                    residual,
                    unique: false,
                };
                write_handle(out, handle);
                TLSFIT_ERR_NO_TLS_SOLUTION
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_system_has_solution(h: *const TlsfitSystem) -> bool {
    h.as_ref().is_some_and(|h| h.coefficients.is_some())
}

/// Number of unknowns `n`.
///
/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_system_unknowns(h: *const TlsfitSystem) -> usize {
    h.as_ref().map_or(0, |h| h.null_vector.len().saturating_sub(1))
}

/// Smallest singular value of `(A | −b)`, the Frobenius distance to the
/// nearest solvable system.
///
/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_system_residual(h: *const TlsfitSystem) -> f64 {
    h.as_ref().map_or(f64::NAN, |h| h.residual)
}

/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_system_unique(h: *const TlsfitSystem) -> bool {
    h.as_ref().is_some_and(|h| h.unique)
}

/// Coefficients, `n` values. Fails with `TLSFIT_ERR_NO_TLS_SOLUTION` when
/// the solve had none.
///
/// # Safety
/// `h` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_system_coefficients(h: *const TlsfitSystem, out: *mut f64, len: usize) -> i32 {
    guard(|| {
        non_null!(h);
        match &(*h).coefficients {
            Some(c) => copy_out(c, out, len),
            None => {
                set_error("no TLS solution");
                TLSFIT_ERR_NO_TLS_SOLUTION
            }
        }
    })
}

/// Singular values of `(A | −b)`, `min(m, n + 1)` values.
///
/// # Safety
/// `h` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_system_singular_values(h: *const TlsfitSystem, out: *mut f64, len: usize) -> i32 {
    copy_from(h, out, len, |h| h.sigma.clone())
}
/// Right singular vector of the smallest singular value, `n + 1` values.
///
/// # Safety
/// `h` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_system_null_vector(h: *const TlsfitSystem, out: *mut f64, len: usize) -> i32 {
    copy_from(h, out, len, |h| h.null_vector.clone())
}

/// # Safety
/// `h` must come from `tlsfit_solve_tls_system` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_system_free(h: *mut TlsfitSystem) {
    free_handle(h)
}

// ---------------------------------------------------------------- multi

/// Opaque result of a multiple right-hand-side TLS solve.
pub struct TlsfitMulti {
    sol: MultiRhsSolution,
}

/// TLS solution of `A X ≈ B` with `A` `m × n` and `B` `m × p`, both row-major.
///
/// # Safety
/// `a` must hold `m·n` values, `b` must hold `m·p`, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_solve_tls_multi(
    a: *const f64,
    m: usize,
    n: usize,
    b: *const f64,
    p: usize,
    out: *mut *mut TlsfitMulti,
) -> i32 {
    guard(|| {
        non_null!(out);
        *out = ptr::null_mut();
        let (a, b) = match (read_matrix(a, m, n), read_matrix(b, m, p)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(code), _) | (_, Err(code)) => return code,
        };
        match tlsfit::solve_tls_multi(&a, &b) {
            Ok(sol) => {
                write_handle(out, TlsfitMulti { sol });
                TLSFIT_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Writes the shape of `X` (`n × p`).
///
/// # Safety
/// `h` must be a live handle; `rows` and `cols` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_multi_shape(h: *const TlsfitMulti, rows: *mut usize, cols: *mut usize) -> i32 {
    non_null!(h, rows, cols);
    (*rows, *cols) = (*h).sol.x.shape();
    TLSFIT_OK
}

/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_multi_unique(h: *const TlsfitMulti) -> bool {
    h.as_ref().is_some_and(|h| h.sol.unique)
}

/// `‖(A | B) − (F | G)‖_F²`.
///
/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_multi_residual_sq(h: *const TlsfitMulti) -> f64 {
    h.as_ref().map_or(f64::NAN, |h| h.sol.residual_sq())
}

/// Solution `X`, `n·p` values row-major.
///
/// # Safety
/// `h` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_multi_solution(h: *const TlsfitMulti, out: *mut f64, len: usize) -> i32 {
    copy_from(h, out, len, |h| row_major(&h.sol.x))
}
/// Singular values of `(A | B)`.
///
/// # Safety
/// `h` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_multi_singular_values(h: *const TlsfitMulti, out: *mut f64, len: usize) -> i32 {
    copy_from(h, out, len, |h| h.sol.sigma.as_slice().to_vec())
}

/// # Safety
/// `h` must come from `tlsfit_solve_tls_multi` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_multi_free(h: *mut TlsfitMulti) {
    free_handle(h)
}

// ---------------------------------------------------------------- fixed

/// Opaque result of a TLS solve with error-free columns.
pub struct TlsfitFixed {
    sol: FixedColsSolution,
}

/// Solves `A₁ X₁ + A₂ X₂ ≈ B` where `A₁` (`m × j`) is exact and only `A₂`
/// (`m × k`) and `B` (`m × p`) are corrected. All blocks are row-major; a
/// block with zero columns may be null.
///
/// # Safety
/// Each pointer must hold its block and `out` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn tlsfit_solve_tls_fixed(
    a1: *const f64,
    j: usize,
    a2: *const f64,
    k: usize,
    b: *const f64,
    m: usize,
    p: usize,
    out: *mut *mut TlsfitFixed,
) -> i32 {
    guard(|| {
        non_null!(out);
        *out = ptr::null_mut();
        let blocks = (read_matrix(a1, m, j), read_matrix(a2, m, k), read_matrix(b, m, p));
        let (a1, a2, b) = match blocks {
            (Ok(a1), Ok(a2), Ok(b)) => (a1, a2, b),
            (Err(code), _, _) | (_, Err(code), _) | (_, _, Err(code)) => return code,
        };
        match tlsfit::solve_tls_fixed(&a1, &a2, &b) {
            Ok(sol) => {
                write_handle(out, TlsfitFixed { sol });
                TLSFIT_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_fixed_minimized_value(h: *const TlsfitFixed) -> f64 {
    h.as_ref().map_or(f64::NAN, |h| h.sol.minimized_value)
}

/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_fixed_unique(h: *const TlsfitFixed) -> bool {
    h.as_ref().is_some_and(|h| h.sol.unique && h.sol.x1_unique)
}

/// Numerical rank of the frozen block.
///
/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_fixed_frozen_rank(h: *const TlsfitFixed) -> usize {
    h.as_ref().map_or(0, |h| h.sol.frozen_rank)
}

/// Frozen-column coefficients `X₁`, `j·p` values row-major.
///
/// # Safety
/// `h` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_fixed_x1(h: *const TlsfitFixed, out: *mut f64, len: usize) -> i32 {
    copy_from(h, out, len, |h| row_major(&h.sol.x1))
}
/// Free-column coefficients `X₂`, `k·p` values row-major.
///
/// # Safety
/// `h` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_fixed_x2(h: *const TlsfitFixed, out: *mut f64, len: usize) -> i32 {
    copy_from(h, out, len, |h| row_major(&h.sol.x2))
}

/// # Safety
/// `h` must come from `tlsfit_solve_tls_fixed` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tlsfit_fixed_free(h: *mut TlsfitFixed) {
    free_handle(h)
}
