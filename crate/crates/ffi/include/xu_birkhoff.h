#ifndef XU_BIRKHOFF_H
#define XU_BIRKHOFF_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum XuStatus {
  XU_STATUS_OK = 0,
  XU_STATUS_INVALID_ARGUMENT = 1,
  XU_STATUS_PARSE = 2,
  XU_STATUS_NOT_UNITARY = 3,
  XU_STATUS_NOT_XU = 4,
  XU_STATUS_UNSUPPORTED_DIMENSION = 5,
  XU_STATUS_SCALING_FAILED = 6,
  XU_STATUS_INTERNAL = 7,
  XU_STATUS_PANIC = 8,
} XuStatus;

/**
 * Values accepted by the `method` argument of [`xu_decompose`].
 */
typedef enum XuMethod {
  XU_METHOD_AUTO = 0,
  XU_METHOD_THEOREM2 = 1,
  XU_METHOD_PRIME = 2,
  XU_METHOD_XU3 = 3,
  XU_METHOD_XU4 = 4,
} XuMethod;

/**
 * Values accepted by the `kind` argument of [`xu_sample`].
 */
typedef enum XuSampleKind {
  XU_SAMPLE_KIND_UNITARY = 0,
  XU_SAMPLE_KIND_XU = 1,
  XU_SAMPLE_KIND_CIRCULANT_XU = 2,
  XU_SAMPLE_KIND_ZU = 3,
} XuSampleKind;

/**
 * Opaque decomposition result.
 */
typedef struct XuDecomposition XuDecomposition;

/**
 * Opaque square complex matrix.
 */
typedef struct XuMatrix XuMatrix;

/**
 * Verification of a decomposition against a matrix.
 *
 * `line_sum_deviation` is NaN and `line_sums_ok` is -1 for complex
 * decompositions, where line sums are not checked.
 */
typedef struct XuReport {
  double reconstruction_error;
  double weight_sum_re;
  double weight_sum_im;
  double sq_moduli_sum;
  size_t term_count;
  double line_sum_deviation;
  double shape_defect;
  double tol;
  bool reconstruction_ok;
  bool weight_sum_ok;
  bool sq_moduli_sum_ok;
  int32_t line_sums_ok;
  bool term_shape_ok;
  /**
   * Every check the engine claims passes.
   */
  bool accepted;
} XuReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *xu_last_error_message(void);

/**
 * Builds a `dim` x `dim` matrix from `2 * dim * dim` interleaved doubles.
 *
 * # Safety
 * `entries` must point to `2 * dim * dim` readable doubles and `out` must be writable.
 */
enum XuStatus xu_matrix_new(size_t dim, const double *entries, struct XuMatrix **out);

/**
 * Parses a matrix from its JSON form `{"dim": n, "entries": [[[re, im], ...], ...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` must be writable.
 */
enum XuStatus xu_matrix_from_json(const char *json, struct XuMatrix **out);

/**
 * Writes the JSON form of `m` to `*out`; release it with [`xu_string_free`].
 *
 * # Safety
 * `m` must be a live handle and `out` must be writable.
 */
enum XuStatus xu_matrix_to_json(const struct XuMatrix *m, char **out);

/**
 * # Safety
 * `s` must come from this library, or be NULL.
 */
void xu_string_free(char *s);

/**
 * Dimension of `m`, or 0 for a NULL handle.
 *
 * # Safety
 * `m` must be a live handle or NULL.
 */
size_t xu_matrix_dim(const struct XuMatrix *m);

/**
 * Reads entry `(row, col)`, 0-based.
 *
 * # Safety
 * `m` must be a live handle; `re` and `im` must be writable.
 */
enum XuStatus xu_matrix_get(const struct XuMatrix *m,
                            size_t row,
                            size_t col,
                            double *re,
                            double *im);

/**
 * # Safety
 * `m` must come from this library, or be NULL.
 */
void xu_matrix_free(struct XuMatrix *m);

/**
 * Draws a random matrix; `kind` is an [`XuSampleKind`] value.
 *
 * # Safety
 * `out` must be writable.
 */
enum XuStatus xu_sample(size_t n, uint32_t kind, uint64_t seed, struct XuMatrix **out);

/**
 * Decomposes `m`. XU input gives real permutation weights; any other
 * unitary gives complex permutation terms. `method` is an [`XuMethod`]
 * value, `p_re + i p_im` splits the XU(3) family, and `seed` drives the
 * scaling restarts.
 *
 * # Safety
 * `m` must be a live handle and `out` must be writable.
 */
enum XuStatus xu_decompose(const struct XuMatrix *m,
                           uint32_t method,
                           double tol,
                           uint64_t seed,
                           double p_re,
                           double p_im,
                           struct XuDecomposition **out);

/**
 * # Safety
 * `d` must be a live handle or NULL.
 */
size_t xu_decomposition_term_count(const struct XuDecomposition *d);

/**
 * # Safety
 * `d` must be a live handle or NULL.
 */
size_t xu_decomposition_dim(const struct XuDecomposition *d);

/**
 * True when the terms carry phases, i.e. the input was unitary but not XU.
 *
 * # Safety
 * `d` must be a live handle or NULL.
 */
bool xu_decomposition_is_complex(const struct XuDecomposition *d);

/**
 * Name of the engine that produced `d` as a static string, or NULL.
 *
 * # Safety
 * `d` must be a live handle or NULL.
 */
const char *xu_decomposition_engine(const struct XuDecomposition *d);

/**
 * Reads term `idx`. `perm_out` receives `n` 1-based images. `phases_out`
 * receives `2n` interleaved doubles (all ones for real decompositions)
 * and may be NULL.
 *
 * # Safety
 * `d` must be a live handle; `perm_out` must hold `n` entries,
 * `phases_out` `2n` doubles if non-NULL; `w_re`, `w_im` must be writable.
 */
enum XuStatus xu_decomposition_term(const struct XuDecomposition *d,
                                    size_t idx,
                                    size_t *perm_out,
                                    double *phases_out,
                                    double *w_re,
                                    double *w_im);

/**
 * Writes the JSON document for `d` (no report) to `*out`; release it with
 * [`xu_string_free`].
 *
 * # Safety
 * `d` must be a live handle and `out` must be writable.
 */
enum XuStatus xu_decomposition_to_json(const struct XuDecomposition *d, char **out);

/**
 * Checks `d` against `target` at tolerance `tol`.
 *
 * # Safety
 * Both handles must be live and `out` must be writable.
 */
enum XuStatus xu_decomposition_verify(const struct XuDecomposition *d,
                                      const struct XuMatrix *target,
                                      double tol,
                                      struct XuReport *out);

/**
 * # Safety
 * `d` must come from this library, or be NULL.
 */
void xu_decomposition_free(struct XuDecomposition *d);

/**
 * Pitches `(x, y)` of the transfer matrix `M_rs` for prime `n`.
 *
 * # Safety
 * `x` and `y` must be writable.
 */
enum XuStatus xu_pitch(size_t n, size_t r, size_t s, size_t *x, size_t *y);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XU_BIRKHOFF_H */
