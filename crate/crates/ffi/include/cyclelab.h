#ifndef CYCLELAB_H
#define CYCLELAB_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of every exported call.
 */
typedef enum CyclelabStatus {
  CYCLELAB_STATUS_OK = 0,
  CYCLELAB_STATUS_NULL_ARGUMENT = 1,
  CYCLELAB_STATUS_INVALID_INPUT = 2,
  CYCLELAB_STATUS_DOMAIN = 3,
  CYCLELAB_STATUS_RESOURCE_CAP = 4,
  CYCLELAB_STATUS_PRECONDITION = 5,
  CYCLELAB_STATUS_INTERNAL = 6,
} CyclelabStatus;

/**
 * Opaque permutation group.
 */
typedef struct CyclelabGroup CyclelabGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *cyclelab_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cyclelab_string_free(char *s);

/**
 * Builds a bundled or named group (`S4`, `AGL1(7)`, `C3wrC2`, `M11`, ...).
 *
 * # Safety
 * `name` must be a nul-terminated string; `out` must be writable.
 */
enum CyclelabStatus cyclelab_group_from_catalog(const char *name, struct CyclelabGroup **out);

/**
 * Builds a group from group-spec JSON (`{name, degree, generators}`,
 * 0-based images).
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum CyclelabStatus cyclelab_group_from_json(const char *json, struct CyclelabGroup **out);

/**
 * # Safety
 * `g` must be null or a handle from this library not yet freed.
 */
void cyclelab_group_free(struct CyclelabGroup *g);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum CyclelabStatus cyclelab_group_degree(const struct CyclelabGroup *g, size_t *out);

/**
 * Group order as a decimal string.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum CyclelabStatus cyclelab_group_order(const struct CyclelabGroup *g, char **out);

/**
 * Proportion of full cycles as `"num/den"`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum CyclelabStatus cyclelab_group_census(const struct CyclelabGroup *g, char **out);

/**
 * Bound report for every maximal chain, as JSON. `*violated` is set when
 * some chain's bound is exceeded.
 *
 * # Safety
 * `g` must be a live handle, `name` a nul-terminated string, and both
 * out-pointers writable.
 */
enum CyclelabStatus cyclelab_verify_bound_json(const struct CyclelabGroup *g,
                                               const char *name,
                                               size_t chain_limit,
                                               bool *violated,
                                               char **out);

/**
 * Largest order of a transitive tower of cyclic groups of degree `n`, as
 * a decimal string.
 *
 * # Safety
 * `out` must be writable.
 */
enum CyclelabStatus cyclelab_cmax(uint64_t n, char **out);

/**
 * Irreducibility over `F_p` of `sum coeffs[i] x^i`.
 *
 * # Safety
 * `coeffs` must point to `len` readable values; `out` must be writable.
 */
enum CyclelabStatus cyclelab_fp_is_irreducible(uint64_t p,
                                               const uint64_t *coeffs,
                                               size_t len,
                                               bool *out);

/**
 * Stable depth of the prime `p` for a sequence spec, up to `max_depth`.
 *
 * # Safety
 * `sequence_json` must be a nul-terminated string; `out` must be writable.
 */
enum CyclelabStatus cyclelab_stable_depth(const char *sequence_json,
                                          uint64_t p,
                                          size_t max_depth,
                                          size_t *out);

/**
 * Stable depth for every prime up to `prime_bound`, as a JSON report.
 * `workers == 0` uses one thread per core.
 *
 * # Safety
 * `sequence_json` must be a nul-terminated string; `out` must be writable.
 */
enum CyclelabStatus cyclelab_scan_json(const char *sequence_json,
                                       uint64_t prime_bound,
                                       size_t max_depth,
                                       size_t workers,
                                       char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CYCLELAB_H */
