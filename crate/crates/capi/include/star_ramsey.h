/* C interface to the star-ramsey decision library. */

#ifndef STAR_RAMSEY_H
#define STAR_RAMSEY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum SrStatus {
  SR_STATUS_OK = 0,
  SR_STATUS_NULL_ARGUMENT = 1,
  SR_STATUS_INVALID_GRAPH6 = 2,
  SR_STATUS_INVALID_EDGE_LIST = 3,
  SR_STATUS_INVALID_INSTANCE = 4,
  SR_STATUS_BUDGET_EXCEEDED = 5,
  SR_STATUS_UNSUPPORTED = 6,
  SR_STATUS_PROOF_PRECONDITION = 7,
  SR_STATUS_PROOF_FAILED = 8,
  SR_STATUS_INTERNAL = 9,
} SrStatus;

/**
 * Opaque arrowing certificate handle.
 */
typedef struct SrCertificate SrCertificate;

/**
 * Opaque simple graph handle (at most 64 vertices).
 */
typedef struct SrGraph SrGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse a graph6 string into a new graph handle.
 *
 * # Safety
 * `g6` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum SrStatus sr_graph_parse_g6(const char *g6, struct SrGraph **out);

/**
 * Build a graph from `edge_count` pairs of endpoints laid out as
 * `[a0, b0, a1, b1, ...]`.
 *
 * # Safety
 * `endpoints` must point to `2 * edge_count` readable entries (it may be
 * NULL when `edge_count` is 0); `out` must be a valid pointer.
 */
enum SrStatus sr_graph_from_edge_list(size_t vertex_count,
                                      const uint32_t *endpoints,
                                      size_t edge_count,
                                      struct SrGraph **out);

/**
 * # Safety
 * `g` must come from this library and not have been freed already.
 */
void sr_graph_free(struct SrGraph *g);

/**
 * Vertex count, or 0 for NULL.
 *
 * # Safety
 * `g` must be a live handle or NULL.
 */
size_t sr_graph_vertex_count(const struct SrGraph *g);

/**
 * Edge count, or 0 for NULL.
 *
 * # Safety
 * `g` must be a live handle or NULL.
 */
size_t sr_graph_edge_count(const struct SrGraph *g);

/**
 * Graph6 encoding of the graph as given.
 *
 * # Safety
 * `g` must be a live handle; `out` must be a valid pointer. Free the
 * result with [`sr_string_free`].
 */
enum SrStatus sr_graph_to_g6(const struct SrGraph *g, char **out);

/**
 * Canonical graph6 form: equal strings exactly for isomorphic graphs.
 *
 * # Safety
 * Same contract as [`sr_graph_to_g6`].
 */
enum SrStatus sr_graph_canonical_g6(const struct SrGraph *g, char **out);

/**
 * # Safety
 * `s` must have been returned by this library and not freed already.
 */
void sr_string_free(char *s);

/**
 * Smallest m for which the n(m+p)-1 bound applies; 0 for degenerate
 * parameters.
 */
size_t sr_m_min(size_t n, size_t p);

/**
 * Build the n(m+p)-1-edge arrowing construction.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SrStatus sr_construct_upper(size_t n, size_t p, size_t m, struct SrGraph **out);

/**
 * Decide whether the host arrows (n K_{1,p}, K_{1,m}). `max_nodes` bounds
 * the search; pass 0 for the default budget.
 *
 * # Safety
 * `g` must be a live handle; `out` must be a valid pointer. Free the
 * certificate with [`sr_cert_free`].
 */
enum SrStatus sr_arrows(const struct SrGraph *g,
                        size_t n,
                        size_t p,
                        size_t m,
                        uint64_t max_nodes,
                        struct SrCertificate **out);

/**
 * 1 when the certified verdict is "arrows", 0 when refuted, -1 for NULL.
 *
 * # Safety
 * `c` must be a live handle or NULL.
 */
int32_t sr_cert_arrows(const struct SrCertificate *c);

/**
 * Serialize the certificate to its JSON interchange form.
 *
 * # Safety
 * `c` must be a live handle; `out` must be a valid pointer. Free the
 * result with [`sr_string_free`].
 */
enum SrStatus sr_cert_to_json(const struct SrCertificate *c, char **out);

/**
 * # Safety
 * `c` must come from this library and not have been freed already.
 */
void sr_cert_free(struct SrCertificate *c);

/**
 * Derive a good coloring of a connected sub-budget host. On success,
 * `*red_ids_out` points at `*len_out` edge ids (host edge order) that are
 * red; every other edge is blue.
 *
 * # Safety
 * `g` must be a live handle; `red_ids_out` and `len_out` must be valid
 * pointers. Free the buffer with [`sr_ids_free`].
 */
enum SrStatus sr_proof_color(const struct SrGraph *g,
                             size_t n,
                             size_t p,
                             size_t m,
                             size_t **red_ids_out,
                             size_t *len_out);

/**
 * # Safety
 * `ids` and `len` must be exactly what [`sr_proof_color`] handed out.
 */
void sr_ids_free(size_t *ids, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STAR_RAMSEY_H */
