#ifndef MLM_H
#define MLM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MlmConnectivity {
  MLM_CONNECTIVITY_FOUR = 0,
  MLM_CONNECTIVITY_EIGHT = 1,
} MlmConnectivity;

typedef enum MlmSceneKind {
  MLM_SCENE_KIND_CANYON6B = 0,
  MLM_SCENE_KIND_CANYON2B = 1,
  MLM_SCENE_KIND_FIG2 = 2,
} MlmSceneKind;

typedef enum MlmStatus {
  MLM_STATUS_OK = 0,
  MLM_STATUS_NULL_POINTER = 1,
  MLM_STATUS_INVALID_ARGUMENT = 2,
  MLM_STATUS_INVALID_SCENE = 3,
  MLM_STATUS_BUDGET_EXCEEDED = 4,
  MLM_STATUS_IO = 5,
  MLM_STATUS_OUT_OF_RANGE = 6,
  MLM_STATUS_INTERNAL = 7,
  MLM_STATUS_PANIC = 8,
} MlmStatus;

typedef struct MlmLabelGrid MlmLabelGrid;

typedef struct MlmScene MlmScene;

// Receiver grid: `nx` by `ny` samples spanning the bounds, both ends included.
typedef struct MlmGridSpec {
  size_t nx;
  size_t ny;
  double x_min;
  double x_max;
  double y_min;
  double y_max;
  double altitude;
} MlmGridSpec;

// Metrics of one cell. `avg_min_dist_m` is NaN when undefined.
typedef struct MlmCellMetrics {
  uint8_t digest[32];
  bool no_multipath;
  size_t sample_count;
  double area_m2;
  double avg_min_dist_m;
  size_t region_count;
} MlmCellMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *mlm_last_error(void);

// Library version as a static NUL-terminated string.
const char *mlm_version(void);

double mlm_disk_equivalent_radius(double area_m2);

// Generates a built-in scene with default parameters.
//
// # Safety
// `out_scene` must be a valid pointer to writable storage for a handle.
enum MlmStatus mlm_scene_generate(enum MlmSceneKind kind, struct MlmScene **out_scene);

// Loads and validates a scene file.
//
// # Safety
// `path` must be a NUL-terminated string and `out_scene` writable.
enum MlmStatus mlm_scene_load(const char *path, struct MlmScene **out_scene);

// # Safety
// `scene` must be a live handle and `path` a NUL-terminated string.
enum MlmStatus mlm_scene_save(const struct MlmScene *scene, const char *path);

// # Safety
// `scene` must be a live handle and `out_count` writable.
enum MlmStatus mlm_scene_facet_count(const struct MlmScene *scene, size_t *out_count);

// # Safety
// `scene` must be null or a handle not yet freed.
void mlm_scene_free(struct MlmScene *scene);

// Labels a receiver grid for a transmitter at `tx[0..3]`, tracing paths of
// up to `max_order` reflections. `workers` = 0 uses every core.
//
// # Safety
// `scene` must be a live handle, `tx` point to three doubles, `spec` be
// valid and `out_grid` writable.
enum MlmStatus mlm_label_grid(const struct MlmScene *scene,
                              const double *tx,
                              const struct MlmGridSpec *spec,
                              size_t max_order,
                              size_t workers,
                              struct MlmLabelGrid **out_grid);

// # Safety
// `grid` must be a live handle; `nx` and `ny` writable.
enum MlmStatus mlm_grid_dimensions(const struct MlmLabelGrid *grid, size_t *nx, size_t *ny);

// Number of distinct cells, the no-multipath cell included.
//
// # Safety
// `grid` must be a live handle and `out_count` writable.
enum MlmStatus mlm_grid_cell_count(const struct MlmLabelGrid *grid, size_t *out_count);

// Number of connected regions over all cells, the no-multipath cell included.
//
// # Safety
// `grid` must be a live handle and `out_count` writable.
enum MlmStatus mlm_grid_region_count(const struct MlmLabelGrid *grid,
                                     enum MlmConnectivity connectivity_kind,
                                     size_t *out_count);

// Cell digest of sample `(i, j)`, `j` = 0 being the minimum y.
//
// # Safety
// `grid` must be a live handle, `digest_out` point to 32 writable bytes and
// `no_multipath_out` be writable or null.
enum MlmStatus mlm_grid_label(const struct MlmLabelGrid *grid,
                              size_t i,
                              size_t j,
                              uint8_t *digest_out,
                              bool *no_multipath_out);

// RGBA color of sample `(i, j)`.
//
// # Safety
// `grid` must be a live handle and `rgba_out` point to 4 writable bytes.
enum MlmStatus mlm_grid_color(const struct MlmLabelGrid *grid,
                              size_t i,
                              size_t j,
                              uint8_t *rgba_out);

// Per-cell metrics ordered by digest. `out_total` receives the number of
// cells; at most `capacity` entries are written to `metrics_out`, which may
// be null when `capacity` is 0.
//
// # Safety
// `grid` must be a live handle, `metrics_out` hold `capacity` entries and
// `out_total` be writable.
enum MlmStatus mlm_grid_metrics(const struct MlmLabelGrid *grid,
                                enum MlmConnectivity connectivity_kind,
                                struct MlmCellMetrics *metrics_out,
                                size_t capacity,
                                size_t *out_total);

// Encodes the map as an RGBA PNG. The buffer is owned by the caller and
// must be released with [`mlm_buffer_free`].
//
// # Safety
// `grid` must be a live handle; `out_data` and `out_len` writable.
enum MlmStatus mlm_grid_render_png(const struct MlmLabelGrid *grid,
                                   uint32_t scale,
                                   bool overlay_tx,
                                   uint8_t **out_data,
                                   size_t *out_len);

// # Safety
// `data` and `len` must come from one call to [`mlm_grid_render_png`], or
// `data` be null.
void mlm_buffer_free(uint8_t *data, size_t len);

// # Safety
// `grid` must be null or a handle not yet freed.
void mlm_grid_free(struct MlmLabelGrid *grid);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MLM_H */
