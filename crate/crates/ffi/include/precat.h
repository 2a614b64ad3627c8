#ifndef PRECAT_H
#define PRECAT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PrecatStatus {
  PRECAT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  PRECAT_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not UTF-8.
   */
  PRECAT_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON, expression text or polygraph.
   */
  PRECAT_STATUS_INPUT_ERROR = 3,
  /**
   * A well-formed request the theory rejects, such as an illegal composition.
   */
  PRECAT_STATUS_DOMAIN_ERROR = 4,
  /**
   * Two cells from different polygraphs were combined.
   */
  PRECAT_STATUS_MISMATCH = 5,
  /**
   * A bug inside the library; the message has details.
   */
  PRECAT_STATUS_PANIC = 6,
} PrecatStatus;

/**
 * A cell of the free precategory on a polygraph. Keeps its polygraph alive.
 */
typedef struct PrecatCell PrecatCell;

/**
 * A polygraph.
 */
typedef struct PrecatPolygraph PrecatPolygraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *precat_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string obtained from this library, freed once.
 */
void precat_string_free(char *s);

/**
 * Parses and validates a polygraph.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum PrecatStatus precat_polygraph_from_json(const char *json, struct PrecatPolygraph **out);

/**
 * # Safety
 * `p` must be null or a handle from this library, freed once.
 */
void precat_polygraph_free(struct PrecatPolygraph *p);

/**
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum PrecatStatus precat_polygraph_to_json(const struct PrecatPolygraph *p, char **out);

/**
 * Evaluates expression text to its normal form.
 *
 * # Safety
 * `p` must be a live handle, `expr` a nul-terminated string and `out` writable.
 */
enum PrecatStatus precat_normalize(const struct PrecatPolygraph *p,
                                   const char *expr,
                                   struct PrecatCell **out);

/**
 * # Safety
 * `u` must be null or a handle from this library, freed once.
 */
void precat_cell_free(struct PrecatCell *u);

/**
 * `u ∘_i v`.
 *
 * # Safety
 * `u` and `v` must be live handles and `out` writable.
 */
enum PrecatStatus precat_compose(const struct PrecatCell *u,
                                 size_t i,
                                 const struct PrecatCell *v,
                                 struct PrecatCell **out);

/**
 * # Safety
 * `u` must be a live handle and `out` writable.
 */
enum PrecatStatus precat_identity(const struct PrecatCell *u, struct PrecatCell **out);

/**
 * Iterated source (`sign < 0`) or target (`sign > 0`) of dimension `k`.
 *
 * # Safety
 * `u` must be a live handle and `out` writable.
 */
enum PrecatStatus precat_boundary(const struct PrecatCell *u,
                                  int32_t sign,
                                  size_t k,
                                  struct PrecatCell **out);

/**
 * # Safety
 * `u` must be a live handle and `out` writable.
 */
enum PrecatStatus precat_cell_dim(const struct PrecatCell *u, size_t *out);

/**
 * Writes 1 to `out` when the cells are equal, 0 otherwise.
 *
 * # Safety
 * `u` and `v` must be live handles and `out` writable.
 */
enum PrecatStatus precat_cell_equal(const struct PrecatCell *u,
                                    const struct PrecatCell *v,
                                    int32_t *out);

/**
 * `{"cell": …, "expr": …}`.
 *
 * # Safety
 * `u` must be a live handle and `out` writable.
 */
enum PrecatStatus precat_cell_to_json(const struct PrecatCell *u, char **out);

/**
 * Expression text for the normal form.
 *
 * # Safety
 * `u` must be a live handle and `out` writable.
 */
enum PrecatStatus precat_cell_to_expr(const struct PrecatCell *u, char **out);

/**
 * # Safety
 * `u` must be a live handle and `out` writable.
 */
enum PrecatStatus precat_support_json(const struct PrecatCell *u, char **out);

/**
 * `{"shape", "cell", "map"}` for the polyplex lifting of the cell.
 *
 * # Safety
 * `u` must be a live handle and `out` writable.
 */
enum PrecatStatus precat_polyplex_json(const struct PrecatCell *u, char **out);

/**
 * # Safety
 * `u` must be a live handle and `out` writable.
 */
enum PrecatStatus precat_measure_json(const struct PrecatCell *u, char **out);

/**
 * Plexes of dimension `dim` with at most `weight` generators.
 *
 * # Safety
 * `out` must be writable.
 */
enum PrecatStatus precat_plexes_json(size_t dim, size_t weight, char **out);

/**
 * Report of the generator/plex correspondence for `p`.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum PrecatStatus precat_makkai_json(const struct PrecatPolygraph *p, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRECAT_H */
