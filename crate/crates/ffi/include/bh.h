#ifndef BH_FFI_H
#define BH_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BhStatus {
  BH_STATUS_OK = 0,
  BH_STATUS_NULL_POINTER = 1,
  BH_STATUS_INVALID_UTF8 = 2,
  BH_STATUS_NOT_HOMOGENEOUS = 3,
  BH_STATUS_DIMENSION_MISMATCH = 4,
  BH_STATUS_INVALID_PARAMETER = 5,
  BH_STATUS_PARSE_ERROR = 6,
  BH_STATUS_CONVERGENCE_FAILURE = 7,
  BH_STATUS_INVARIANT_VIOLATED = 8,
  BH_STATUS_IO_ERROR = 9,
  BH_STATUS_PANIC = 10,
} BhStatus;

/**
 * Opaque polynomial handle.
 */
typedef struct BhPoly BhPoly;

/**
 * A lower bound. `log_value` is exact in range; `value` overflows to
 * infinity past the double range.
 */
typedef struct BhBound {
  uint32_t m;
  uint32_t power;
  double value;
  double log_value;
  double mth_root;
  /**
   * Nonzero when the sup norm came from a heuristic search.
   */
  uint8_t heuristic;
} BhBound;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *bh_last_error_message(void);

/**
 * Parse the text serialization of a polynomial.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BhStatus bh_poly_parse(const char *text, struct BhPoly **out);

/**
 * Build a named family member. `params` is `key=value;key=value` or null;
 * `precision_digits` 0 selects the default.
 *
 * # Safety
 * String arguments must be NUL-terminated or null; `out` must be valid.
 */
enum BhStatus bh_family_make(const char *family,
                             const char *params,
                             uint32_t precision_digits,
                             struct BhPoly **out);

/**
 * # Safety
 * `poly` must come from this library and not be freed twice. Null is a no-op.
 */
void bh_poly_free(struct BhPoly *poly);

/**
 * # Safety
 * `poly` must be a live handle and `out` a valid pointer. The string is
 * released with `bh_string_free`.
 */
enum BhStatus bh_poly_serialize(const struct BhPoly *poly, char **out);

/**
 * # Safety
 * `s` must come from this library. Null is a no-op.
 */
void bh_string_free(char *s);

/**
 * Variable count, degree and number of nonzero terms.
 *
 * # Safety
 * `poly` must be a live handle; the out pointers must be valid.
 */
enum BhStatus bh_poly_info(const struct BhPoly *poly,
                           size_t *n_vars,
                           uint32_t *degree,
                           size_t *terms);

/**
 * # Safety
 * `poly` must be a live handle and `out` a valid pointer.
 */
enum BhStatus bh_poly_pow(const struct BhPoly *poly, uint32_t k, struct BhPoly **out);

/**
 * # Safety
 * `x` must point to `len` doubles; `out` must be valid.
 */
enum BhStatus bh_poly_eval(const struct BhPoly *poly, const double *x, size_t len, double *out);

/**
 * Coefficient `ℓ_p` norm with `p = p_num / p_den`.
 *
 * # Safety
 * `poly` must be a live handle; out pointers must be valid.
 */
enum BhStatus bh_poly_lp_norm(const struct BhPoly *poly,
                              uint64_t p_num,
                              uint64_t p_den,
                              double *out_value,
                              double *out_log);

/**
 * Sup norm over the cube and the attained value at the reported maximizer.
 *
 * # Safety
 * `poly` must be a live handle; out pointers must be valid.
 */
enum BhStatus bh_poly_sup_norm(const struct BhPoly *poly,
                               uint64_t seed,
                               double *out_value,
                               double *out_certified,
                               uint8_t *out_heuristic);

/**
 * `|P|_{2m/(m+1)} / ‖P‖` with the sup norm chosen automatically.
 *
 * # Safety
 * `poly` must be a live handle and `out` a valid pointer.
 */
enum BhStatus bh_poly_lower_bound(const struct BhPoly *poly, struct BhBound *out);

/**
 * Bound from the `power`-th power of a family member.
 *
 * # Safety
 * String arguments must be NUL-terminated or null; `out` must be valid.
 */
enum BhStatus bh_power_bound(const char *family,
                             const char *params,
                             uint32_t power,
                             uint32_t precision_digits,
                             struct BhBound *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BH_FFI_H */
