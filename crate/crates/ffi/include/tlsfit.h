#ifndef TLSFIT_H
#define TLSFIT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define TLSFIT_OK 0

#define TLSFIT_ERR_NULL_POINTER 1

#define TLSFIT_ERR_DIMENSION 2

#define TLSFIT_ERR_NON_FINITE 3

#define TLSFIT_ERR_CONVERGENCE 4

#define TLSFIT_ERR_RANK_DEFICIENT 5

#define TLSFIT_ERR_DEGENERATE 6

#define TLSFIT_ERR_EMPTY 7

// The system has no TLS solution. The system handle is still written and
// exposes the null vector and singular values.
#define TLSFIT_ERR_NO_TLS_SOLUTION 8

#define TLSFIT_ERR_BUFFER_TOO_SMALL 9

#define TLSFIT_ERR_INVALID_ARGUMENT 10

#define TLSFIT_ERR_PANIC 99

#define TLSFIT_OLS_NORMAL_EQUATIONS 0

#define TLSFIT_OLS_QR 1

#define TLSFIT_OLS_SVD 2

#define TLSFIT_OLS_CLOSED_FORM 3

// Opaque result of a TLS solve with error-free columns.
typedef struct TlsfitFixed TlsfitFixed;

// Opaque result of a hyperplane fit.
typedef struct TlsfitHyperplane TlsfitHyperplane;

// Opaque result of a multiple right-hand-side TLS solve.
typedef struct TlsfitMulti TlsfitMulti;

// Opaque result of a single right-hand-side TLS solve. When the solve
// reported `TLSFIT_ERR_NO_TLS_SOLUTION` only the null vector and singular
// values are available.
typedef struct TlsfitSystem TlsfitSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *tlsfit_last_error_message(void);

// Least squares `min ‖A c − y‖` with `A` row-major `m × n`. Writes `n`
// coefficients; `residual_norm` and `rank_deficient` may be null.
//
// # Safety
// Pointers must reference buffers of the stated sizes.
int32_t tlsfit_solve_ols(const double *a,
                         size_t m,
                         size_t n,
                         const double *y,
                         int32_t method,
                         double *coefficients,
                         size_t len,
                         double *residual_norm,
                         bool *rank_deficient);

// Fits a hyperplane to `m` points in `n` dimensions, given row-major.
//
// # Safety
// `points` must hold `m·n` values and `out` must be writable.
int32_t tlsfit_fit_hyperplane(const double *points,
                              size_t m,
                              size_t n,
                              struct TlsfitHyperplane **out);

// Ambient dimension `n`; the length of the normal, centroid and singular values.
//
// # Safety
// `h` must be a live handle or null.
size_t tlsfit_hyperplane_dim(const struct TlsfitHyperplane *h);

// # Safety
// `h` must be a live handle or null.
double tlsfit_hyperplane_objective(const struct TlsfitHyperplane *h);

// # Safety
// `h` must be a live handle or null.
bool tlsfit_hyperplane_unique(const struct TlsfitHyperplane *h);

// Whether the plane can be written as `y = c₀ + Σ cₖ xₖ`.
//
// # Safety
// `h` must be a live handle or null.
bool tlsfit_hyperplane_expressible(const struct TlsfitHyperplane *h);

// Unit normal, `n` values.
//
// # Safety
// `h` must be a live handle and `out` must hold `len` values.
int32_t tlsfit_hyperplane_normal(const struct TlsfitHyperplane *h, double *out, size_t len);

// Centroid of the cloud, `n` values.
//
// # Safety
// `h` must be a live handle and `out` must hold `len` values.
int32_t tlsfit_hyperplane_centroid(const struct TlsfitHyperplane *h, double *out, size_t len);

// Singular values of the centered cloud, `min(m, n)` values.
//
// # Safety
// `h` must be a live handle and `out` must hold `len` values.
int32_t tlsfit_hyperplane_singular_values(const struct TlsfitHyperplane *h,
                                          double *out,
                                          size_t len);

// Explicit coefficients `(c₀, …, c_{n−1})`, `n` values. Fails with
// `TLSFIT_ERR_DEGENERATE` when the plane is not expressible.
//
// # Safety
// `h` must be a live handle and `out` must hold `len` values.
int32_t tlsfit_hyperplane_explicit(const struct TlsfitHyperplane *h, double *out, size_t len);

// # Safety
// `h` must come from `tlsfit_fit_hyperplane` and not be used afterwards.
void tlsfit_hyperplane_free(struct TlsfitHyperplane *h);

// TLS solution of `A c ≈ b`, `A` row-major `m × n`. On
// `TLSFIT_ERR_NO_TLS_SOLUTION` the handle is still written.
//
// # Safety
// `a` must hold `m·n` values, `b` must hold `m`, and `out` must be writable.
int32_t tlsfit_solve_tls_system(const double *a,
                                size_t m,
                                size_t n,
                                const double *b,
                                struct TlsfitSystem **out);

// # Safety
// `h` must be a live handle or null.
bool tlsfit_system_has_solution(const struct TlsfitSystem *h);

// Number of unknowns `n`.
//
// # Safety
// `h` must be a live handle or null.
size_t tlsfit_system_unknowns(const struct TlsfitSystem *h);

// Smallest singular value of `(A | −b)`, the Frobenius distance to the
// nearest solvable system.
//
// # Safety
// `h` must be a live handle or null.
double tlsfit_system_residual(const struct TlsfitSystem *h);

// # Safety
// `h` must be a live handle or null.
bool tlsfit_system_unique(const struct TlsfitSystem *h);

// Coefficients, `n` values. Fails with `TLSFIT_ERR_NO_TLS_SOLUTION` when
// the solve had none.
//
// # Safety
// `h` must be a live handle and `out` must hold `len` values.
int32_t tlsfit_system_coefficients(const struct TlsfitSystem *h, double *out, size_t len);

// Singular values of `(A | −b)`, `min(m, n + 1)` values.
//
// # Safety
// `h` must be a live handle and `out` must hold `len` values.
int32_t tlsfit_system_singular_values(const struct TlsfitSystem *h, double *out, size_t len);

// Right singular vector of the smallest singular value, `n + 1` values.
//
// # Safety
// `h` must be a live handle and `out` must hold `len` values.
int32_t tlsfit_system_null_vector(const struct TlsfitSystem *h, double *out, size_t len);

// # Safety
// `h` must come from `tlsfit_solve_tls_system` and not be used afterwards.
void tlsfit_system_free(struct TlsfitSystem *h);

// TLS solution of `A X ≈ B` with `A` `m × n` and `B` `m × p`, both row-major.
//
// # Safety
// `a` must hold `m·n` values, `b` must hold `m·p`, and `out` must be writable.
int32_t tlsfit_solve_tls_multi(const double *a,
                               size_t m,
                               size_t n,
                               const double *b,
                               size_t p,
                               struct TlsfitMulti **out);

// Writes the shape of `X` (`n × p`).
//
// # Safety
// `h` must be a live handle; `rows` and `cols` must be writable.
int32_t tlsfit_multi_shape(const struct TlsfitMulti *h, size_t *rows, size_t *cols);

// # Safety
// `h` must be a live handle or null.
bool tlsfit_multi_unique(const struct TlsfitMulti *h);

// `‖(A | B) − (F | G)‖_F²`.
//
// # Safety
// `h` must be a live handle or null.
double tlsfit_multi_residual_sq(const struct TlsfitMulti *h);

// Solution `X`, `n·p` values row-major.
//
// # Safety
// `h` must be a live handle and `out` must hold `len` values.
int32_t tlsfit_multi_solution(const struct TlsfitMulti *h, double *out, size_t len);

// Singular values of `(A | B)`.
//
// # Safety
// `h` must be a live handle and `out` must hold `len` values.
int32_t tlsfit_multi_singular_values(const struct TlsfitMulti *h, double *out, size_t len);

// # Safety
// `h` must come from `tlsfit_solve_tls_multi` and not be used afterwards.
void tlsfit_multi_free(struct TlsfitMulti *h);

// Solves `A₁ X₁ + A₂ X₂ ≈ B` where `A₁` (`m × j`) is exact and only `A₂`
// (`m × k`) and `B` (`m × p`) are corrected. All blocks are row-major; a
// block with zero columns may be null.
//
// # Safety
// Each pointer must hold its block and `out` must be writable.
int32_t tlsfit_solve_tls_fixed(const double *a1,
                               size_t j,
                               const double *a2,
                               size_t k,
                               const double *b,
                               size_t m,
                               size_t p,
                               struct TlsfitFixed **out);

// # Safety
// `h` must be a live handle or null.
double tlsfit_fixed_minimized_value(const struct TlsfitFixed *h);

// # Safety
// `h` must be a live handle or null.
bool tlsfit_fixed_unique(const struct TlsfitFixed *h);

// Numerical rank of the frozen block.
//
// # Safety
// `h` must be a live handle or null.
size_t tlsfit_fixed_frozen_rank(const struct TlsfitFixed *h);

// Frozen-column coefficients `X₁`, `j·p` values row-major.
//
// # Safety
// `h` must be a live handle and `out` must hold `len` values.
int32_t tlsfit_fixed_x1(const struct TlsfitFixed *h, double *out, size_t len);

// Free-column coefficients `X₂`, `k·p` values row-major.
//
// # Safety
// `h` must be a live handle and `out` must hold `len` values.
int32_t tlsfit_fixed_x2(const struct TlsfitFixed *h, double *out, size_t len);

// # Safety
// `h` must come from `tlsfit_solve_tls_fixed` and not be used afterwards.
void tlsfit_fixed_free(struct TlsfitFixed *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TLSFIT_H */
