/* C interface to the maxatlas toolkit. Strings returned through out-parameters are heap-allocated and must be released with maxatlas_string_free. */

#ifndef MAXATLAS_H
#define MAXATLAS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every FFI call.
 */
typedef enum MaxatlasStatus {
  MAXATLAS_STATUS_OK = 0,
  /**
   * Bad arguments: unknown names, non prime powers, unparseable JSON.
   */
  MAXATLAS_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The toolkit detected a mathematical inconsistency.
   */
  MAXATLAS_STATUS_MATH_INCONSISTENCY = 3,
  /**
   * An internal error or panic; the library state is still sound.
   */
  MAXATLAS_STATUS_INTERNAL_ERROR = 4,
  /**
   * A required pointer was null.
   */
  MAXATLAS_STATUS_NULL_POINTER = 5,
} MaxatlasStatus;

/**
 * Opaque handle over the loaded maximal-subgroup tables.
 */
typedef struct MaxatlasAtlas MaxatlasAtlas;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be a pointer previously produced by a maxatlas function, not yet
 * freed; null is ignored.
 */
void maxatlas_string_free(char *s);

/**
 * Library version as a static string (do not free).
 */
const char *maxatlas_version(void);

/**
 * Loads the maximal-subgroup tables. `data_dir` may be null for the
 * embedded data, or a directory holding the seven table files.
 *
 * # Safety
 * `out` must be a valid pointer; `data_dir` must be null or a valid C
 * string.
 */
enum MaxatlasStatus maxatlas_atlas_new(const char *data_dir, struct MaxatlasAtlas **out);

/**
 * Releases an atlas handle.
 *
 * # Safety
 * `atlas` must come from [`maxatlas_atlas_new`] and not be freed twice;
 * null is ignored.
 */
void maxatlas_atlas_free(struct MaxatlasAtlas *atlas);

/**
 * Queries the maximal subgroups of `family` ("F4", "E6", "2E6") at q.
 * `induced` is a comma-separated list of induced outer automorphisms
 * ("gamma,phi") or null for none. The result is a JSON document.
 *
 * # Safety
 * `atlas` must be a live handle; string arguments must be valid C strings
 * or null as documented; `out_json` must be valid.
 */
enum MaxatlasStatus maxatlas_query_maximals(const struct MaxatlasAtlas *atlas,
                                            const char *family,
                                            uint64_t q,
                                            const char *induced,
                                            char **out_json);

/**
 * Embedding decision for PSL(2,8) and PSL(2,8).3 at q, as JSON.
 *
 * # Safety
 * `out_json` must be a valid pointer.
 */
enum MaxatlasStatus maxatlas_embedding_decision(uint64_t q, char **out_json);

/**
 * Whether the named polynomial (f1..f5) splits over F_q. With
 * `direct_route` the answer comes from exact factorization in a
 * constructed field; otherwise from the congruence classes. The two
 * always agree; a disagreement would be reported as an inconsistency.
 *
 * # Safety
 * `poly` must be a valid C string; `out` must be a valid pointer.
 */
enum MaxatlasStatus maxatlas_splits(const char *poly, uint64_t q, bool direct_route, bool *out);

/**
 * Builds the PSL(2,8).3 form report at q as JSON: the embedding flags, the
 * field containing the 7th root of unity, and per-solution invariance,
 * singularity and radical dimension.
 *
 * # Safety
 * `out_json` must be a valid pointer.
 */
enum MaxatlasStatus maxatlas_sl28_report(uint64_t q, char **out_json);

/**
 * Pressure of a composition profile given as JSON (a list of factors
 * {label, dim, h1_dim, is_trivial}).
 *
 * # Safety
 * `profile_json` must be a valid C string; `out` must be a valid pointer.
 */
enum MaxatlasStatus maxatlas_pressure(const char *profile_json, int64_t *out);

/**
 * Complement-class computations for an instance document
 * {"orders": [...], "action": [[...]], "order_w": m}: writes the
 * centralizer bound and the brute-force class count.
 *
 * # Safety
 * `instance_json` must be a valid C string; out-pointers must be valid.
 */
enum MaxatlasStatus maxatlas_complement_classes(const char *instance_json,
                                                uint64_t *out_bound,
                                                uint64_t *out_bruteforce);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MAXATLAS_H */
