#ifndef TROPNEWTON_H
#define TROPNEWTON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TnStatus {
  TN_STATUS_OK = 0,
  TN_STATUS_NULL_POINTER = 1,
  TN_STATUS_INVALID_UTF8 = 2,
  TN_STATUS_INVALID_INPUT = 3,
  TN_STATUS_FAN = 4,
  TN_STATUS_PUSHFORWARD = 5,
  TN_STATUS_SEARCH = 6,
  TN_STATUS_HULL = 7,
  TN_STATUS_SYMMETRY = 8,
  TN_STATUS_ARITHMETIC = 9,
  TN_STATUS_OVERFLOW = 10,
  TN_STATUS_PANIC = 11,
} TnStatus;

/**
 * Opaque handle to a weighted fan.
 */
typedef struct TnFan TnFan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a fan from NUL-terminated JSON.
 *
 * # Safety
 * `json` must be a valid C string and `out` a writable pointer.
 */
enum TnStatus tn_fan_from_json(const char *json, struct TnFan **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `fan` must come from this library and not be used afterwards.
 */
void tn_fan_free(struct TnFan *fan);

/**
 * Serializes a fan; free the result with `tn_string_free`.
 *
 * # Safety
 * `fan` must be a live handle and `out` writable.
 */
enum TnStatus tn_fan_to_json(const struct TnFan *fan, char **out);

/**
 * Ambient dimension, or 0 for a null handle.
 *
 * # Safety
 * `fan` must be null or a live handle.
 */
size_t tn_fan_ambient_dim(const struct TnFan *fan);

/**
 * Number of maximal cones, or 0 for a null handle.
 *
 * # Safety
 * `fan` must be null or a live handle.
 */
size_t tn_fan_cone_count(const struct TnFan *fan);

/**
 * Vertex maximizing `objective`; writes `ambient_dim` entries to `out`.
 *
 * # Safety
 * `objective` must hold `len` values and `out` room for `out_len`.
 */
enum TnStatus tn_ray_shoot(const struct TnFan *fan,
                           const int64_t *objective,
                           size_t len,
                           int64_t *out,
                           size_t out_len);

/**
 * `grading · vertex` for a row-major `rows × cols` grading matrix.
 *
 * # Safety
 * `grading` must hold `rows*cols` values, `vertex` `cols` values and
 * `out` room for `rows`.
 */
enum TnStatus tn_multidegree(const int64_t *grading,
                             size_t rows,
                             size_t cols,
                             const int64_t *vertex,
                             int64_t *out);

/**
 * Tropical Hadamard square with weights divided by `delta`.
 *
 * # Safety
 * `fan` must be a live handle and `out` writable.
 */
enum TnStatus tn_hadamard_square(const struct TnFan *fan,
                                 uint64_t delta,
                                 uint64_t seed,
                                 struct TnFan **out);

/**
 * Vertices and facets of the Newton polytope as a JSON ledger, starting
 * from a shot at a seeded random objective.
 *
 * # Safety
 * `fan` must be a live handle and `out` writable.
 */
enum TnStatus tn_complete_polytope(const struct TnFan *fan, uint64_t seed, char **out);

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *tn_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void tn_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TROPNEWTON_H */
