/* C interface for the biuniv verification library. */

#ifndef BIUNIV_H
#define BIUNIV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define BIUNIV_FUNCTIONAL_A2 0

#define BIUNIV_FUNCTIONAL_A3 1

#define BIUNIV_FUNCTIONAL_FS 2

#define BIUNIV_MODE_PAPER 0

#define BIUNIV_MODE_SCHUR 1

#define BIUNIV_FS_CASE_SMALL_SIGMA 0

#define BIUNIV_FS_CASE_LARGE_SIGMA 1

/**
 * Result of every API call. Zero is success; everything else names the
 * failure. `biuniv_status_message` renders a static description.
 */
typedef enum BiunivStatus {
  BIUNIV_STATUS_OK = 0,
  BIUNIV_STATUS_NULL_ARGUMENT = 1,
  BIUNIV_STATUS_DOMAIN = 2,
  BIUNIV_STATUS_NOT_NORMALIZED = 3,
  BIUNIV_STATUS_NONZERO_CONSTANT_TERM = 4,
  BIUNIV_STATUS_BOUND_UNDEFINED = 5,
  BIUNIV_STATUS_DEGENERATE_DENOMINATOR = 6,
  BIUNIV_STATUS_INCONSISTENT_PAIR = 7,
  BIUNIV_STATUS_PANIC = 8,
  BIUNIV_STATUS_INVALID_ARGUMENT = 9,
} BiunivStatus;

/**
 * Opaque handle for one validated parameter point.
 */
typedef struct BiunivParams BiunivParams;

/**
 * Outcome of one extremal run. When `no_feasible_sample` is set the argmax
 * fields hold zeros and `empirical_max` is zero.
 */
typedef struct BiunivExtremal {
  double empirical_max;
  double bound_printed;
  double bound_derived;
  double margin_derived;
  double p1_re;
  double p1_im;
  double p2_re;
  double p2_im;
  double q2_re;
  double q2_im;
  uint64_t feasible_samples;
  bool violation_printed;
  bool violation_derived;
  bool no_feasible_sample;
} BiunivExtremal;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *biuniv_version(void);

/**
 * Static description of a status code.
 */
const char *biuniv_status_message(enum BiunivStatus status);

/**
 * Writes U_n(t) to `out`.
 *
 * # Safety
 * `out` must point to a writable double.
 */
enum BiunivStatus biuniv_cheby_u(uint32_t n, double t, double *out);

/**
 * Writes U_n(t) in trigonometric form to `out`.
 *
 * # Safety
 * `out` must point to a writable double.
 */
enum BiunivStatus biuniv_cheby_u_trig(uint32_t n, double t, double *out);

/**
 * Writes T_n(t) to `out`.
 *
 * # Safety
 * `out` must point to a writable double.
 */
enum BiunivStatus biuniv_cheby_t(uint32_t n, double t, double *out);

/**
 * Writes the first `order + 1` coefficients of 1/(1 - 2tz + z^2) to `out`.
 *
 * # Safety
 * `out` must point to at least `order + 1` writable doubles.
 */
enum BiunivStatus biuniv_h_coeffs(double t, size_t order, double *out);

/**
 * Validates (delta, t, m) and writes a fresh handle to `out`.
 *
 * # Safety
 * `out` must point to a writable pointer slot. The handle must be released
 * with `biuniv_params_free`.
 */
enum BiunivStatus biuniv_params_new(double delta, double t, uint32_t m, struct BiunivParams **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `params` must be null or a handle from `biuniv_params_new` not yet freed.
 */
void biuniv_params_free(struct BiunivParams *params);

/**
 * Writes the coefficient weight for index `k` to `out`.
 *
 * # Safety
 * `params` must be a live handle; `out` must point to a writable double.
 */
enum BiunivStatus biuniv_params_weight(const struct BiunivParams *params, uint32_t k, double *out);

/**
 * Printed |a2| bound.
 *
 * # Safety
 * `params` must be a live handle; `out` must point to a writable double.
 */
enum BiunivStatus biuniv_printed_a2_bound(const struct BiunivParams *params, double *out);

/**
 * Printed |a3| bound.
 *
 * # Safety
 * `params` must be a live handle; `out` must point to a writable double.
 */
enum BiunivStatus biuniv_printed_a3_bound(const struct BiunivParams *params, double *out);

/**
 * Derived |a2| bound.
 *
 * # Safety
 * `params` must be a live handle; `out` must point to a writable double.
 */
enum BiunivStatus biuniv_derived_a2_bound(const struct BiunivParams *params, double *out);

/**
 * Derived |a3| bound.
 *
 * # Safety
 * `params` must be a live handle; `out` must point to a writable double.
 */
enum BiunivStatus biuniv_derived_a3_bound(const struct BiunivParams *params, double *out);

/**
 * Printed sigma(r).
 *
 * # Safety
 * `params` must be a live handle; `out` must point to a writable double.
 */
enum BiunivStatus biuniv_sigma_printed(const struct BiunivParams *params, double r, double *out);

/**
 * Derived sigma(r).
 *
 * # Safety
 * `params` must be a live handle; `out` must point to a writable double.
 */
enum BiunivStatus biuniv_sigma_derived(const struct BiunivParams *params, double r, double *out);

/**
 * Printed Fekete-Szego bound at weight `r`. `literal` keeps the division
 * in the large-sigma branch. `out_case` may be null.
 *
 * # Safety
 * `params` must be a live handle; `out_value` must point to a writable
 * double; `out_case`, when non-null, to a writable int.
 */
enum BiunivStatus biuniv_printed_fs_bound(const struct BiunivParams *params,
                                          double r,
                                          bool literal,
                                          double *out_value,
                                          int *out_case);

/**
 * Derived Fekete-Szego bound at weight `r`. `out_case` may be null.
 *
 * # Safety
 * `params` must be a live handle; `out_value` must point to a writable
 * double; `out_case`, when non-null, to a writable int.
 */
enum BiunivStatus biuniv_derived_fs_bound(const struct BiunivParams *params,
                                          double r,
                                          double *out_value,
                                          int *out_case);

/**
 * Inverts z + coeffs[0] z^2 + ... and writes the inverse coefficients for
 * z^2 through z^order (that is, `order - 1` doubles) to `out`.
 *
 * # Safety
 * `coeffs` must point to `len` readable doubles (null only if `len` is 0);
 * `out` must point to `order - 1` writable doubles.
 */
enum BiunivStatus biuniv_invert(const double *coeffs, size_t len, size_t order, double *out);

/**
 * Residual of the two subordination expansions for the pair closed over
 * (p1, p2); zero (up to rounding) exactly when the pair sits on the
 * constraint system.
 *
 * # Safety
 * `params` must be a live handle; `out` must point to a writable double.
 */
enum BiunivStatus biuniv_membership_residual(const struct BiunivParams *params,
                                             double p1_re,
                                             double p1_im,
                                             double p2_re,
                                             double p2_im,
                                             double *out);

/**
 * Runs one seeded extremal search. `functional` is one of the
 * BIUNIV_FUNCTIONAL_* codes (`r` only matters for the Fekete-Szego one);
 * `mode` is one of the BIUNIV_MODE_* codes.
 *
 * # Safety
 * `params` must be a live handle; `out` must point to a writable
 * `BiunivExtremal`.
 */
enum BiunivStatus biuniv_maximize(const struct BiunivParams *params,
                                  int functional,
                                  double r,
                                  int mode,
                                  uint64_t samples,
                                  uint64_t seed,
                                  uint32_t refine_steps,
                                  double refine_shrink,
                                  struct BiunivExtremal *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIUNIV_H */
