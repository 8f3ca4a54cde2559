#ifndef CASCADE_INFLUENCE_H
#define CASCADE_INFLUENCE_H

/* Generated by cbindgen. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  CI_STATUS_OK = 0,
  CI_STATUS_NULL_POINTER = 1,
  CI_STATUS_INVALID_TREE = 2,
  CI_STATUS_SIZE_MISMATCH = 3,
  CI_STATUS_INVALID_ARGUMENT = 4,
  CI_STATUS_INVALID_BUDGET = 5,
  CI_STATUS_PANIC = 6,
} CiStatus;

/**
 * Opaque tree handle.
 */
typedef struct CiTree CiTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a tree from a parent array; `-1` marks the root.
 *
 * # Safety
 * `parents` must point to `node_count` readable values and `out` must be a
 * valid pointer to write the handle to.
 */
CiStatus ci_tree_from_parents(const int64_t *parents, size_t node_count, CiTree **out);

/**
 * Builds a tree on `node_count` nodes from `edge_count` `(parent, child)`
 * pairs given as two parallel arrays.
 *
 * # Safety
 * `parents` and `children` must each point to `edge_count` readable values
 * and `out` must be a valid pointer to write the handle to.
 */
CiStatus ci_tree_from_edges(size_t node_count,
                            const size_t *parents,
                            const size_t *children,
                            size_t edge_count,
                            CiTree **out);

/**
 * Uniform random recursive tree on `node_count` nodes.
 *
 * # Safety
 * `out` must be a valid pointer to write the handle to.
 */
CiStatus ci_random_tree(size_t node_count, uint64_t seed, CiTree **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `tree` must be null or a handle returned by this library that has not
 * been freed.
 */
void ci_tree_free(CiTree *tree);

/**
 * Number of nodes, or 0 for a null handle.
 *
 * # Safety
 * `tree` must be null or a live handle.
 */
size_t ci_tree_node_count(const CiTree *tree);

/**
 * Influence of the labelling `labels` (one byte per node, 0 or 1).
 *
 * # Safety
 * `tree` must be a live handle, `labels` must point to `len` readable bytes
 * and `out_influence` must be writable.
 */
CiStatus ci_influence(const CiTree *tree, const uint8_t *labels, size_t len, size_t *out_influence);

/**
 * Maximum influence and a labelling attaining it with the fewest 1-nodes.
 * `labels_out` must hold exactly one byte per node; `out_influence` and
 * `out_k` may be null.
 *
 * # Safety
 * `tree` must be a live handle and `labels_out` must point to `len`
 * writable bytes.
 */
CiStatus ci_optimal(const CiTree *tree,
                    uint8_t *labels_out,
                    size_t len,
                    size_t *out_influence,
                    size_t *out_k);

/**
 * Greedy placement of exactly `k` 1-nodes, seeded by `seed`.
 *
 * # Safety
 * `tree` must be a live handle, `labels_out` must point to `len` writable
 * bytes and `out_influence` must be null or writable.
 */
CiStatus ci_greedy(const CiTree *tree,
                   size_t k,
                   uint64_t seed,
                   uint8_t *labels_out,
                   size_t len,
                   size_t *out_influence);

/**
 * Static description of a status code. Takes the raw integer so any value
 * a C caller passes is safe.
 */
const char *ci_status_message(int32_t status);

/**
 * Detail of the last failure on this thread, or null. Valid until the next
 * call into this library on the same thread.
 */
const char *ci_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CASCADE_INFLUENCE_H */
