#ifndef DRG_NORTON_H
#define DRG_NORTON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DrgStatus {
  DRG_STATUS_OK = 0,
  DRG_STATUS_NULL_POINTER = 1,
  DRG_STATUS_INVALID_ARGUMENT = 2,
  DRG_STATUS_PARSE_ERROR = 3,
  DRG_STATUS_DISCONNECTED = 4,
  DRG_STATUS_NOT_DISTANCE_REGULAR = 5,
  DRG_STATUS_DIAMETER_TOO_SMALL = 6,
  DRG_STATUS_NO_Q_ORDERING = 7,
  DRG_STATUS_NUMERICAL_FAILURE = 8,
  DRG_STATUS_INDEX_OUT_OF_RANGE = 9,
  DRG_STATUS_BUFFER_TOO_SMALL = 10,
  DRG_STATUS_PANIC = 11,
} DrgStatus;

/**
 * Opaque handle to a completed analysis of a distance-regular graph.
 */
typedef struct DrgAnalysis DrgAnalysis;

/**
 * Opaque graph handle.
 */
typedef struct DrgGraph DrgGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *drg_last_error_message(void);

/**
 * Static, NUL-terminated name of a status code.
 */
const char *drg_status_name(enum DrgStatus status);

/**
 * Builds a graph on `n` vertices from `edge_count` pairs stored flat in
 * `edges` (`2 * edge_count` entries).
 */
enum DrgStatus drg_graph_from_edges(size_t n,
                                    const size_t *edges,
                                    size_t edge_count,
                                    struct DrgGraph **out);

/**
 * Parses edge-list text (`n m` header, then `m` lines `u v`).
 */
enum DrgStatus drg_graph_parse_edge_list(const char *text, struct DrgGraph **out);

/**
 * Generates a named family member: `cycle`, `hamming`, `johnson`,
 * `petersen` or `hypercube`. `max_vertices == 0` selects the default cap.
 */
enum DrgStatus drg_graph_from_family(const char *name,
                                     const size_t *params,
                                     size_t param_count,
                                     size_t max_vertices,
                                     struct DrgGraph **out);

void drg_graph_free(struct DrgGraph *graph);

/**
 * Vertex count, or 0 for a null handle.
 */
size_t drg_graph_vertex_count(const struct DrgGraph *graph);

size_t drg_graph_edge_count(const struct DrgGraph *graph);

/**
 * Runs the full pipeline. Non-positive `tolerance` or negative
 * `nz_relative` select the defaults. A graph without Q-polynomial ordering
 * still yields a handle and `DRG_STATUS_OK`; ordering queries on it
 * return `DRG_STATUS_NO_Q_ORDERING`.
 */
enum DrgStatus drg_analysis_new(const struct DrgGraph *graph,
                                double tolerance,
                                double nz_relative,
                                struct DrgAnalysis **out);

void drg_analysis_free(struct DrgAnalysis *analysis);

size_t drg_analysis_vertex_count(const struct DrgAnalysis *analysis);

/**
 * Diameter d, or 0 for a null handle.
 */
size_t drg_analysis_diameter(const struct DrgAnalysis *analysis);

/**
 * Writes c_i, a_i, b_i for i = 0..d into three arrays of length >= d+1.
 */
enum DrgStatus drg_analysis_intersection_numbers(const struct DrgAnalysis *analysis,
                                                 uint64_t *c,
                                                 uint64_t *a,
                                                 uint64_t *b,
                                                 size_t len);

/**
 * Eigenvalues θ_0 > θ_1 > ... > θ_d in natural (decreasing) order.
 */
enum DrgStatus drg_analysis_eigenvalues(const struct DrgAnalysis *analysis,
                                        double *out,
                                        size_t len);

/**
 * Multiplicities m_i = rank E_i, in the same order as the eigenvalues.
 */
enum DrgStatus drg_analysis_multiplicities(const struct DrgAnalysis *analysis,
                                           uint64_t *out,
                                           size_t len);

/**
 * Krein parameter q^h_{ij} with indices in natural eigenvalue order.
 */
enum DrgStatus drg_analysis_krein(const struct DrgAnalysis *analysis,
                                  size_t h,
                                  size_t i,
                                  size_t j,
                                  double *out);

/**
 * Number of Q-polynomial orderings found.
 */
size_t drg_analysis_ordering_count(const struct DrgAnalysis *analysis);

/**
 * Natural indices of E_1, ..., E_d under ordering `k` (d entries).
 */
enum DrgStatus drg_analysis_ordering(const struct DrgAnalysis *analysis,
                                     size_t k,
                                     size_t *out,
                                     size_t len);

/**
 * Dual eigenvalues θ*_0, ..., θ*_d of E_1 under ordering `k`.
 */
enum DrgStatus drg_analysis_dual_eigenvalues(const struct DrgAnalysis *analysis,
                                             size_t k,
                                             double *out,
                                             size_t len);

/**
 * Norton product Ex̂ ⋆ Eŷ for ordering `k`, computed directly as
 * E(Ex̂ ∘ Eŷ). Writes n coordinates.
 */
enum DrgStatus drg_norton_product(const struct DrgAnalysis *analysis,
                                  size_t k,
                                  size_t x,
                                  size_t y,
                                  double *out,
                                  size_t len);

/**
 * Norton product Ex̂ ⋆ Eŷ from the closed-form expansion in Ex̂, Eŷ and
 * the vectors of the local split of (x, y).
 */
enum DrgStatus drg_norton_product_formula(const struct DrgAnalysis *analysis,
                                          size_t k,
                                          size_t x,
                                          size_t y,
                                          double *out,
                                          size_t len);

/**
 * Full JSON report as a newly allocated string; release with
 * [`drg_string_free`]. `source` may be NULL.
 */
enum DrgStatus drg_analysis_report_json(const struct DrgAnalysis *analysis,
                                        const char *source,
                                        char **out);

void drg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DRG_NORTON_H */
