#ifndef CMLD_H
#define CMLD_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum CmldStatus {
  CMLD_STATUS_OK = 0,
  CMLD_STATUS_NULL_POINTER = 1,
  CMLD_STATUS_INVALID_UTF8 = 2,
  CMLD_STATUS_PARSE = 3,
  CMLD_STATUS_INVALID_ARGUMENT = 4,
  // The multiplicities cannot cover `k` variables.
  CMLD_STATUS_INFEASIBLE = 5,
  // A size limit (`max_k`, oracle bounds, field width) was exceeded.
  CMLD_STATUS_RESOURCE_LIMIT = 6,
  // The output buffer is too small; the required length was still written.
  CMLD_STATUS_BUFFER_TOO_SMALL = 7,
  CMLD_STATUS_INTERNAL = 8,
} CmldStatus;

typedef struct CmldCircuit CmldCircuit;

typedef struct CmldGraph CmldGraph;

typedef struct CmldMotif CmldMotif;

// Run settings. Start from [`cmld_config_default`].
typedef struct CmldConfig {
  // Failure probability, in (0, 1).
  double delta;
  uint64_t seed;
  uint32_t threads;
  // Field width b; 0 picks it from the degree.
  uint32_t field_bits;
  // Overrides the planned number of trials when nonzero.
  uint64_t max_trials;
  // Largest k accepted by the multilinear detectors.
  uint32_t max_k;
} CmldConfig;

// Outcome of a yes/no query.
typedef struct CmldDecision {
  bool answer;
  uint64_t trials_run;
  uint64_t planned_trials;
  uint32_t field_bits;
} CmldDecision;

// Outcome of a minimization.
typedef struct CmldMinimum {
  // False when no feasible value was found.
  bool found;
  uint64_t value;
  uint64_t trials_run;
} CmldMinimum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *cmld_version(void);

// Message of the last failed call on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *cmld_last_error(void);

struct CmldConfig cmld_config_default(void);

// Parses a graph in the text format (`n m` header, vertex lines
// `<label> <color>`, edge lines `<label> <label>`).
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum CmldStatus cmld_graph_parse(const char *text, struct CmldGraph **out);

// # Safety
// `graph` must come from [`cmld_graph_parse`] or be null.
void cmld_graph_free(struct CmldGraph *graph);

// Number of vertices, 0 for a null handle.
//
// # Safety
// `graph` must be a live handle or null.
size_t cmld_graph_vertex_count(const struct CmldGraph *graph);

// Parses a motif, one `<color> <multiplicity>` pair per line.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum CmldStatus cmld_motif_parse(const char *text, struct CmldMotif **out);

// # Safety
// `motif` must come from [`cmld_motif_parse`] or be null.
void cmld_motif_free(struct CmldMotif *motif);

// Total multiplicity, 0 for a null handle.
//
// # Safety
// `motif` must be a live handle or null.
size_t cmld_motif_size(const struct CmldMotif *motif);

// Parses a circuit in s-expression form, e.g. `(+ (* x1 x2) x3)`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum CmldStatus cmld_circuit_parse(const char *text, struct CmldCircuit **out);

// # Safety
// `circuit` must come from [`cmld_circuit_parse`] or be null.
void cmld_circuit_free(struct CmldCircuit *circuit);

// Number of distinct variables, in order of first appearance.
//
// # Safety
// `circuit` must be a live handle or null.
size_t cmld_circuit_var_count(const struct CmldCircuit *circuit);

// Does the circuit contain a multilinear term of degree `k`?
//
// When `var_colors` is non-null the query becomes constrained:
// `var_colors[v] < color_count` is the color of variable `v` (for all
// `var_count` variables) and at most `multiplicities[c]` chosen variables
// may have color `c`.
//
// # Safety
// Handles must be live; arrays must hold the stated number of elements.
enum CmldStatus cmld_detect(const struct CmldCircuit *circuit,
                            size_t k,
                            const uint32_t *var_colors,
                            size_t var_count,
                            const size_t *multiplicities,
                            size_t color_count,
                            const struct CmldConfig *config,
                            struct CmldDecision *out);

// Graph Motif: is there a connected vertex set whose colors equal the motif?
//
// # Safety
// Handles must be live and `out` valid; `config` may be null for defaults.
enum CmldStatus cmld_graph_motif(const struct CmldGraph *graph,
                                 const struct CmldMotif *motif,
                                 const struct CmldConfig *config,
                                 struct CmldDecision *out);

// Multiset Motif: is there a connected `k`-set whose colors fit in the motif?
//
// # Safety
// Handles must be live and `out` valid; `config` may be null for defaults.
enum CmldStatus cmld_multiset_motif(const struct CmldGraph *graph,
                                    const struct CmldMotif *motif,
                                    size_t k,
                                    const struct CmldConfig *config,
                                    struct CmldDecision *out);

// Writes the vertex indices of one occurrence into `vertices`.
//
// `*found` tells whether an occurrence was found and `*len` how many indices
// it has. If `capacity` is too small, nothing is copied, `*len` still holds
// the required length and the call returns `BufferTooSmall`.
//
// # Safety
// Handles must be live; `vertices` must hold `capacity` elements.
enum CmldStatus cmld_find_occurrence(const struct CmldGraph *graph,
                                     const struct CmldMotif *motif,
                                     const struct CmldConfig *config,
                                     size_t *vertices,
                                     size_t capacity,
                                     size_t *len,
                                     bool *found);

// Min-Add: fewest extra vertices joining the motif into a connected set.
// A negative `max_p` means no cap.
//
// # Safety
// Handles must be live and `out` valid; `config` may be null for defaults.
enum CmldStatus cmld_min_add(const struct CmldGraph *graph,
                             const struct CmldMotif *motif,
                             int64_t max_p,
                             const struct CmldConfig *config,
                             struct CmldMinimum *out);

// Min-CC: fewest connected components over motif-colored sets.
//
// # Safety
// Handles must be live and `out` valid; `config` may be null for defaults.
enum CmldStatus cmld_min_cc(const struct CmldGraph *graph,
                            const struct CmldMotif *motif,
                            const struct CmldConfig *config,
                            struct CmldMinimum *out);

// Min-Substitute: fewest color substitutions over connected `|M|`-sets.
//
// # Safety
// Handles must be live and `out` valid; `config` may be null for defaults.
enum CmldStatus cmld_min_substitute(const struct CmldGraph *graph,
                                    const struct CmldMotif *motif,
                                    const struct CmldConfig *config,
                                    struct CmldMinimum *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CMLD_H */
