/* C interface for the optonet steady-state entanglement engine. */

#pragma once

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum OptonetStatus {
  OPTONET_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  OPTONET_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  OPTONET_STATUS_INVALID_UTF8 = 2,
  /**
   * A parameter violated its invariant (see the last-error message).
   */
  OPTONET_STATUS_INVALID_PARAM = 3,
  /**
   * Key/value level configuration problem (unknown key, bad value).
   */
  OPTONET_STATUS_CONFIG = 4,
  /**
   * The drift matrix is unstable: no steady state exists.
   */
  OPTONET_STATUS_UNSTABLE = 5,
  /**
   * The drift matrix is marginally stable: no unique steady state.
   */
  OPTONET_STATUS_MARGINAL = 6,
  /**
   * Numerical failure (eigenvalue iteration, singular solve).
   */
  OPTONET_STATUS_NUMERICAL = 7,
  /**
   * Shape or usage contract violation.
   */
  OPTONET_STATUS_CONTRACT = 8,
  /**
   * Unknown mode name (valid names: b1, b2, as, a).
   */
  OPTONET_STATUS_UNKNOWN_MODE = 9,
  /**
   * The mode is not present in this system (three-mode mask).
   */
  OPTONET_STATUS_MODE_ABSENT = 10,
  /**
   * Degenerate coupling configuration.
   */
  OPTONET_STATUS_DEGENERATE = 11,
  /**
   * Unsupported configuration for the requested analysis.
   */
  OPTONET_STATUS_UNSUPPORTED = 12,
  /**
   * The covariance is not a valid two-mode Gaussian state.
   */
  OPTONET_STATUS_UNPHYSICAL = 13,
  /**
   * The output buffer is too small.
   */
  OPTONET_STATUS_BUFFER_TOO_SMALL = 14,
  /**
   * The requested quantity is unavailable (e.g. covariance of an
   * unstable point).
   */
  OPTONET_STATUS_UNAVAILABLE = 15,
  /**
   * Internal panic; file a bug.
   */
  OPTONET_STATUS_INTERNAL = 16,
} OptonetStatus;

/**
 * Opaque parameter-set handle.
 */
typedef struct OptonetParams OptonetParams;

/**
 * Opaque solve-result handle.
 */
typedef struct OptonetReport OptonetReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread (empty string when none). Valid until
 * the next library call on the same thread.
 */
const char *optonet_last_error_message(void);

/**
 * Short name of a status code.
 */
const char *optonet_status_name(enum OptonetStatus status);

/**
 * Create a parameter set with the library defaults (decoupled, stable).
 */
struct OptonetParams *optonet_params_new(void);

/**
 * Release a parameter set. Null is accepted and ignored.
 *
 * # Safety
 * `params` must be a pointer from [`optonet_params_new`], not yet freed.
 */
void optonet_params_free(struct OptonetParams *params);

/**
 * Set one parameter by key name (the config-file keys). `aux_present`
 * accepts 0.0/1.0.
 *
 * # Safety
 * `params` must be a live handle; `key` a NUL-terminated string.
 */
enum OptonetStatus optonet_params_set(struct OptonetParams *params, const char *key, double value);

/**
 * Read one parameter back by key name (`aux_present` reads as 0.0/1.0).
 *
 * # Safety
 * `params` must be a live handle; `key` NUL-terminated; `out` non-null.
 */
enum OptonetStatus optonet_params_get(const struct OptonetParams *params,
                                      const char *key,
                                      double *out);

/**
 * Check the parameter invariants without solving.
 *
 * # Safety
 * `params` must be a live handle.
 */
enum OptonetStatus optonet_params_validate(const struct OptonetParams *params);

/**
 * Run the stability -> Lyapunov -> negativity pipeline. Succeeds even when
 * the point is unstable: the report then carries the spectrum but no
 * covariance, and the covariance accessors return `Unavailable`.
 *
 * # Safety
 * `params` must be a live handle; `out` non-null. The returned handle must
 * be released with [`optonet_report_free`].
 */
enum OptonetStatus optonet_solve(const struct OptonetParams *params, struct OptonetReport **out);

/**
 * Release a report handle. Null is accepted and ignored.
 *
 * # Safety
 * `report` must be a pointer from [`optonet_solve`], not yet freed.
 */
void optonet_report_free(struct OptonetReport *report);

/**
 * 1 if the drift matrix is strictly stable, else 0.
 *
 * # Safety
 * `report` must be a live handle.
 */
int32_t optonet_report_is_stable(const struct OptonetReport *report);

/**
 * Largest real part of the drift spectrum.
 *
 * # Safety
 * `report` must be a live handle.
 */
double optonet_report_max_re_eig(const struct OptonetReport *report);

/**
 * Quadrature dimension of the system (8, or 6 with the auxiliary cavity
 * masked out).
 *
 * # Safety
 * `report` must be a live handle.
 */
size_t optonet_report_dim(const struct OptonetReport *report);

/**
 * Copy the steady-state covariance into `buf` (row-major, `dim * dim`
 * entries).
 *
 * # Safety
 * `report` must be a live handle; `buf` must point to at least `len`
 * doubles.
 */
enum OptonetStatus optonet_report_covariance(const struct OptonetReport *report,
                                             double *buf,
                                             size_t len);

/**
 * Residual of the Lyapunov solve, `Unavailable` for unstable points.
 *
 * # Safety
 * `report` must be a live handle; `out` non-null.
 */
enum OptonetStatus optonet_report_residual(const struct OptonetReport *report, double *out);

/**
 * Logarithmic negativity of a mode pair (mode names: b1, b2, as, a).
 *
 * # Safety
 * `report` must be a live handle; mode names NUL-terminated; `out` non-null.
 */
enum OptonetStatus optonet_report_log_negativity(const struct OptonetReport *report,
                                                 const char *mode_a,
                                                 const char *mode_b,
                                                 double *out);

/**
 * Smallest partially-transposed symplectic eigenvalue of a mode pair.
 *
 * # Safety
 * `report` must be a live handle; mode names NUL-terminated; `out` non-null.
 */
enum OptonetStatus optonet_report_sigma_minus(const struct OptonetReport *report,
                                              const char *mode_a,
                                              const char *mode_b,
                                              double *out);

/**
 * Full report as a JSON document (same shape as `optonet solve --format
 * json`). The pointer stays valid until the report is freed.
 *
 * # Safety
 * `report` must be a live handle.
 */
const char *optonet_report_json(const struct OptonetReport *report);

/**
 * Evaluate the dark-mode existence conditions: writes M1, M2 and the
 * verdict (1 = a dark mode exists). Pass `tol <= 0` for the default
 * tolerance.
 *
 * # Safety
 * `params` must be a live handle; output pointers non-null.
 */
enum OptonetStatus optonet_dark_mode(const struct OptonetParams *params,
                                     double tol,
                                     double *m1,
                                     double *m2,
                                     int32_t *exists);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
