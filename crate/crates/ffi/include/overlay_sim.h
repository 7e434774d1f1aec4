#ifndef OVERLAY_SIM_H
#define OVERLAY_SIM_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OsimStatus {
  OSIM_STATUS_OK = 0,
  OSIM_STATUS_NULL_POINTER = 1,
  OSIM_STATUS_INVALID_ARGUMENT = 2,
  OSIM_STATUS_UNKNOWN_NODE = 3,
  OSIM_STATUS_SELF_LOOP = 4,
  /**
   * A well-formed link mutation was refused (duplicate, degree cap, or
   * isolation guard). The network is unchanged.
   */
  OSIM_STATUS_REJECTED = 5,
  OSIM_STATUS_EMPTY_REPORT = 6,
  OSIM_STATUS_BUFFER_TOO_SMALL = 7,
  OSIM_STATUS_INTERNAL = 8,
} OsimStatus;

typedef enum OsimMode {
  OSIM_MODE_FLOODING = 1,
  OSIM_MODE_GUIDED = 2,
  OSIM_MODE_ADAPTIVE = 3,
} OsimMode;

/**
 * Opaque experiment configuration, including output settings.
 */
typedef struct OsimConfig OsimConfig;

/**
 * Opaque overlay network.
 */
typedef struct OsimNetwork OsimNetwork;

/**
 * Opaque experiment result.
 */
typedef struct OsimReport OsimReport;

/**
 * Result of one search. `matched_node` and `achieved_distance` are only
 * meaningful when `success` is true.
 */
typedef struct OsimSearchOutcome {
  bool success;
  size_t matched_node;
  uint8_t achieved_distance;
  uint32_t hops;
  uint64_t messages_sent;
  uint32_t swaps;
} OsimSearchOutcome;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *osim_last_error_message(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 */
void osim_string_free(char *s);

/**
 * Manhattan distance between two 3-element descriptions (elements 0..=4).
 */
enum OsimStatus osim_distance(const uint8_t *a, const uint8_t *b, uint8_t *out);

/**
 * Similarity percentage in [0, 100] between two descriptions.
 */
enum OsimStatus osim_similarity(const uint8_t *a, const uint8_t *b, double *out);

/**
 * Generates a random network. Release it with [`osim_network_free`].
 */
enum OsimStatus osim_network_generate(size_t num_nodes,
                                      size_t max_connections,
                                      uint64_t seed,
                                      struct OsimNetwork **out);

void osim_network_free(struct OsimNetwork *net);

/**
 * Deep copy of a network, caches included.
 */
struct OsimNetwork *osim_network_clone(const struct OsimNetwork *net);

size_t osim_network_node_count(const struct OsimNetwork *net);

size_t osim_network_edge_count(const struct OsimNetwork *net);

/**
 * Writes the node's three description elements to `out`.
 */
enum OsimStatus osim_network_description(const struct OsimNetwork *net, size_t node, uint8_t *out);

/**
 * Copies the node's neighbor ids, ascending, into `buf`. `len` always
 * receives the neighbor count; a buffer smaller than that yields
 * `BUFFER_TOO_SMALL` with nothing written.
 */
enum OsimStatus osim_network_neighbors(const struct OsimNetwork *net,
                                       size_t node,
                                       size_t *buf,
                                       size_t capacity,
                                       size_t *len);

enum OsimStatus osim_network_add_link(struct OsimNetwork *net, size_t a, size_t b);

enum OsimStatus osim_network_remove_link(struct OsimNetwork *net, size_t a, size_t b);

/**
 * Mean semantic distance over all links.
 */
enum OsimStatus osim_network_mean_link_distance(const struct OsimNetwork *net, double *out);

/**
 * DOT rendering of the network; free with [`osim_string_free`].
 */
char *osim_network_export_dot(const struct OsimNetwork *net);

/**
 * Runs one search. Guided and adaptive modes update peer caches, and the
 * adaptive mode may rewire the network.
 */
enum OsimStatus osim_search(struct OsimNetwork *net,
                            enum OsimMode mode,
                            size_t originator,
                            const uint8_t *target,
                            double allowable_error,
                            uint32_t hop_limit,
                            struct OsimSearchOutcome *out);

/**
 * A configuration holding the default experiment settings.
 */
struct OsimConfig *osim_config_new(void);

void osim_config_free(struct OsimConfig *cfg);

/**
 * Sets one option using the command-line key names, e.g.
 * `osim_config_set(cfg, "num-nodes", "200")`.
 */
enum OsimStatus osim_config_set(struct OsimConfig *cfg, const char *key, const char *value);

/**
 * Runs the configured sweep. Release the result with [`osim_report_free`].
 */
enum OsimStatus osim_run_experiment(const struct OsimConfig *cfg, struct OsimReport **out);

void osim_report_free(struct OsimReport *report);

/**
 * Metrics table in the CLI's CSV format; free with [`osim_string_free`].
 * NULL if the report is empty.
 */
char *osim_report_csv(const struct OsimReport *report);

/**
 * DOT text of the snapshot topology: `adapted` selects the post-run network.
 * NULL when the configuration disabled snapshots.
 */
char *osim_report_snapshot_dot(const struct OsimReport *report, bool adapted);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OVERLAY_SIM_H */
