#ifndef FRACSPLINE_H
#define FRACSPLINE_H

/* Generated by cbindgen from the fracspline-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes.
 */
typedef enum FsStatus {
  FS_STATUS_OK = 0,
  FS_STATUS_NULL_POINTER = 1,
  FS_STATUS_INVALID_ORDER = 2,
  FS_STATUS_POLE = 3,
  FS_STATUS_INVALID_ARGUMENT = 4,
  FS_STATUS_NUMERICAL = 5,
  FS_STATUS_VERIFICATION_FAILED = 6,
  FS_STATUS_PANIC = 7,
} FsStatus;

/**
 * Opaque complex B-spline handle.
 */
typedef struct FsBSpline FsBSpline;

/**
 * A complex number.
 */
typedef struct FsComplex {
  double re;
  double im;
} FsComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *fs_status_message(enum FsStatus status);

/**
 * `Γ(re + i im)`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum FsStatus fs_gamma(double re, double im, struct FsComplex *out);

/**
 * Creates a spline of order `re + i im` (`re > 1`).
 *
 * # Safety
 * `out` must be null or valid for writes. On success the handle written to
 * `out` must be released with [`fs_bspline_free`].
 */
enum FsStatus fs_bspline_new(double re, double im, struct FsBSpline **out);

/**
 * Releases a spline handle. Null is ignored.
 *
 * # Safety
 * `spline` must be null or a handle from [`fs_bspline_new`] not yet freed.
 */
void fs_bspline_free(struct FsBSpline *spline);

/**
 * Time-domain value at `x`. `accuracy_loss` (optional) receives 1 when the
 * series lost accuracy to cancellation and the Fourier inversion was used.
 *
 * # Safety
 * `spline` must be a live handle; `out` valid for writes; `accuracy_loss`
 * null or valid for writes.
 */
enum FsStatus fs_bspline_eval_time(const struct FsBSpline *spline,
                                   double x,
                                   struct FsComplex *out,
                                   int *accuracy_loss);

/**
 * Spectrum `Ω(ω)^z` at `w`.
 *
 * # Safety
 * `spline` must be a live handle and `out` valid for writes.
 */
enum FsStatus fs_bspline_eval_freq(const struct FsBSpline *spline, double w, struct FsComplex *out);

/**
 * Runs a verification suite and writes the JSON report to `json_out`
 * (release with [`fs_string_free`]). Returns `VerificationFailed` when an
 * identity failed; the report is written in that case too.
 *
 * # Safety
 * `suite` must be a NUL-terminated string; `json_out` valid for writes.
 */
enum FsStatus fs_verify_suite(const char *suite, uint64_t seed, char **json_out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void fs_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACSPLINE_H */
