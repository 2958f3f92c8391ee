#ifndef GRASSLP_H
#define GRASSLP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes.
typedef enum GlStatus {
  GL_STATUS_OK = 0,
  // Mathematical domain or applicability failure.
  GL_STATUS_DOMAIN = 1,
  // Bad argument (null pointer, malformed partition, size mismatch).
  GL_STATUS_INVALID_ARGUMENT = 2,
  // Output buffer too small; the required size was reported.
  GL_STATUS_BUFFER_TOO_SMALL = 3,
  // Numerical failure (eigensolver).
  GL_STATUS_NUMERICAL = 4,
  GL_STATUS_INTERNAL = 5,
  GL_STATUS_PANIC = 6,
} GlStatus;

typedef enum GlSource {
  GL_SOURCE_EXACT = 0,
  GL_SOURCE_CLOSED_FORM = 1,
} GlSource;

typedef enum GlMethod {
  GL_METHOD_SIMPLEX = 0,
  GL_METHOD_ORTHOPLEX = 1,
  GL_METHOD_DEGREE2 = 2,
  GL_METHOD_DEGREE3 = 3,
  GL_METHOD_EIGEN = 4,
  GL_METHOD_TEPS = 5,
  GL_METHOD_BEST = 6,
} GlMethod;

// The truncated Jacobi operator `J′_k`.
typedef struct GlJacobi GlJacobi;

// Zonal polynomials `P_κ` for fixed `(m, n)` up to some degree.
typedef struct GlZonalTable GlZonalTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *grasslp_version(void);

// Copies the last error message of this thread into `buf`.
//
// # Safety
// `buf` must be valid for `cap` bytes (or null); `needed` null or writable.
enum GlStatus grasslp_last_error(char *buf, size_t cap, size_t *needed);

// Builds (or fetches from the in-process memo) the table for `(m, n)` up to
// degree `max_degree`.
//
// # Safety
// `out` must be writable.
enum GlStatus grasslp_zonal_table_new(size_t m,
                                      size_t n,
                                      size_t max_degree,
                                      struct GlZonalTable **out);

// # Safety
// `table` must come from [`grasslp_zonal_table_new`] and not be used again.
void grasslp_zonal_table_free(struct GlZonalTable *table);

// `P_κ(y_1, …, y_m)`.
//
// # Safety
// `parts` holds `len` values, `y` holds `y_len` values, `out` is writable.
enum GlStatus grasslp_zonal_eval(const struct GlZonalTable *table,
                                 const uint32_t *parts,
                                 size_t len,
                                 const double *y,
                                 size_t y_len,
                                 double *out);

// Eigenvalue of `P_κ` under the radial Laplacian.
//
// # Safety
// As for [`grasslp_zonal_eval`].
enum GlStatus grasslp_zonal_eigenvalue(const struct GlZonalTable *table,
                                       const uint32_t *parts,
                                       size_t len,
                                       double *out);

// Dimension `d_{2κ}` of the corresponding representation (as a double).
//
// # Safety
// As for [`grasslp_zonal_eval`].
enum GlStatus grasslp_zonal_dim(const struct GlZonalTable *table,
                                const uint32_t *parts,
                                size_t len,
                                double *out);

// `P_κ` on the monomial basis, exact, e.g. `m(1) - 1`.
//
// # Safety
// `buf` valid for `cap` bytes or null; `needed` null or writable.
enum GlStatus grasslp_zonal_render(const struct GlZonalTable *table,
                                   const uint32_t *parts,
                                   size_t len,
                                   char *buf,
                                   size_t cap,
                                   size_t *needed);

// # Safety
// `out` must be writable.
enum GlStatus grasslp_jacobi_new(size_t m,
                                 size_t n,
                                 size_t k,
                                 enum GlSource source,
                                 struct GlJacobi **out);

// # Safety
// `op` must come from [`grasslp_jacobi_new`] and not be used again.
void grasslp_jacobi_free(struct GlJacobi *op);

// Matrix size; 0 for a null handle.
//
// # Safety
// `op` null or a live handle.
size_t grasslp_jacobi_dim(const struct GlJacobi *op);

// Largest eigenvalue; the Perron vector is copied into `vector` when it is
// non-null (it must then hold `grasslp_jacobi_dim` values).
//
// # Safety
// `op` live; `out` writable; `vector` null or valid for the dimension.
enum GlStatus grasslp_jacobi_lambda_max(const struct GlJacobi *op, double *out, double *vector);

// All eigenvalues in increasing order into `values` (`grasslp_jacobi_dim` slots).
//
// # Safety
// `op` live; `values` valid for the dimension.
enum GlStatus grasslp_jacobi_eigenvalues(const struct GlJacobi *op, double *values);

// Upper bound on the size of a code in `G_{m,n}` with `σ ≤ s` between
// distinct elements. `k` is the degree for eigen/teps and the largest degree
// tried for `Best`. A non-applicable method gives `Domain`; `Best` with no
// applicable method gives `Ok` and +inf.
//
// # Safety
// `out` must be writable.
enum GlStatus grasslp_bound(size_t m,
                            size_t n,
                            double s,
                            enum GlMethod method,
                            size_t k,
                            double *out);

// Asymptotic LP rate (natural log).
//
// # Safety
// `out` must be writable.
enum GlStatus grasslp_lp_rate(size_t m, double s, double *out);

// Asymptotic Hamming rate (natural log).
//
// # Safety
// `out` must be writable.
enum GlStatus grasslp_hamming_rate(size_t m, double s, double *out);

// Crossing point of the two rates.
//
// # Safety
// `out` must be writable.
enum GlStatus grasslp_crossing(size_t m, double *out);

// Audits a code file, writing the JSON report into `buf`. `pass` receives
// 1 when every bound holds and every positivity sum is nonnegative.
//
// # Safety
// `path` NUL-terminated; `buf`/`needed`/`pass` as for [`grasslp_zonal_render`].
enum GlStatus grasslp_audit_file(const char *path,
                                 size_t k_max,
                                 int32_t *pass,
                                 char *buf,
                                 size_t cap,
                                 size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRASSLP_H */
