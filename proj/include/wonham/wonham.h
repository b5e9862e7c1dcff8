#ifndef WONHAM_WONHAM_H
#define WONHAM_WONHAM_H

/* C interface to the Wonham filter lab.
 *
 * Every fallible call returns a wl_status. On failure the message of the most
 * recent error on the calling thread is available from wl_last_error().
 * Handles are opaque and owned by the caller; release them with the matching
 * *_destroy function (passing NULL is allowed).
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(WONHAM_BUILDING_LIBRARY)
#    define WONHAM_API __declspec(dllexport)
#  else
#    define WONHAM_API __declspec(dllimport)
#  endif
#else
#  define WONHAM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wl_status {
    WL_OK = 0,
    WL_ERR_INVALID_ARGUMENT = 1,
    WL_ERR_NEGATIVE_OFF_DIAGONAL = 2,
    WL_ERR_ROW_SUM_NONZERO = 3,
    WL_ERR_REDUCIBLE = 4,
    WL_ERR_SINGULAR_SYSTEM = 5,
    WL_ERR_NON_INTERIOR = 6,
    WL_ERR_DIMENSION_MISMATCH = 7,
    WL_ERR_NON_FINITE_STATE = 8,
    WL_ERR_GRID_EXCEEDS_PATH = 9,
    WL_ERR_RANK_TOO_LARGE = 10,
    WL_ERR_NEGATIVE_RATE = 11,
    WL_ERR_GRID_MISMATCH = 12,
    WL_ERR_CONFIG = 13,
    WL_ERR_IO = 14,
    WL_ERR_BUFFER_TOO_SMALL = 15,
    WL_ERR_INTERNAL = 16
} wl_status;

typedef enum wl_fixture {
    WL_FIXTURE_THREE_STATE = 0,
    WL_FIXTURE_SIX_STATE = 1
} wl_fixture;

typedef struct wl_rate_matrix wl_rate_matrix;
typedef struct wl_scenario wl_scenario;
typedef struct wl_run_result wl_run_result;

WONHAM_API const char* wl_version(void);
WONHAM_API const char* wl_status_name(wl_status status);
/* Message of the last failed call on this thread; "" if none. */
WONHAM_API const char* wl_last_error(void);

/* ---- rate matrices ---------------------------------------------------- */

WONHAM_API wl_status wl_rate_matrix_create(size_t n_states, const double* row_major,
                                           wl_rate_matrix** out);
WONHAM_API wl_status wl_rate_matrix_appendix_b(int n, wl_rate_matrix** out);
/* approximate != 0 selects the rounded low-rank counterpart of the fixture. */
WONHAM_API wl_status wl_rate_matrix_fixture(wl_fixture which, int approximate,
                                            wl_rate_matrix** out);
WONHAM_API wl_status wl_rate_matrix_from_text(const char* text, wl_rate_matrix** out);
WONHAM_API void wl_rate_matrix_destroy(wl_rate_matrix* q);

WONHAM_API size_t wl_rate_matrix_size(const wl_rate_matrix* q);
WONHAM_API int wl_rate_matrix_strictly_positive(const wl_rate_matrix* q);
/* Copies n*n entries in row-major order; capacity counts doubles. */
WONHAM_API wl_status wl_rate_matrix_entries(const wl_rate_matrix* q, double* out,
                                            size_t capacity);
/* Writes NUL-terminated text. *required (if non-NULL) receives the size
 * needed including the terminator, also when the buffer is too small. */
WONHAM_API wl_status wl_rate_matrix_to_text(const wl_rate_matrix* q, char* buffer,
                                            size_t capacity, size_t* required);

/* ---- single-shot quantities ------------------------------------------- */

WONHAM_API wl_status wl_stationary_distribution(const wl_rate_matrix* q, double* out,
                                                size_t capacity);
WONHAM_API wl_status wl_deterministic_rate(const wl_rate_matrix* q, double* out);
/* subset == 0: simple pathwise rate; otherwise the subset-minimized rate.
 * *exact (optional) is 0 when the subset rate fell back to the simple one. */
WONHAM_API wl_status wl_pathwise_rate(const wl_rate_matrix* q, const double* p, size_t n,
                                      int subset, double* out, int* exact);
/* Writes +infinity when the supports differ. */
WONHAM_API wl_status wl_hilbert_distance(const double* mu, const double* nu, size_t n,
                                         double* out);

/* ---- scenarios -------------------------------------------------------- */

WONHAM_API wl_status wl_scenario_load_file(const char* path, wl_scenario** out);
WONHAM_API wl_status wl_scenario_from_json(const char* json_text, wl_scenario** out);
/* figure: "fig1", "fig2:<n>", "fig4:3" or "fig4:6". */
WONHAM_API wl_status wl_scenario_preset(const char* figure, int paper_scale, wl_scenario** out);
/* 0 selects the hardware thread count. Results do not depend on it. */
WONHAM_API wl_status wl_scenario_set_workers(wl_scenario* scenario, int workers);
WONHAM_API void wl_scenario_destroy(wl_scenario* scenario);

WONHAM_API wl_status wl_scenario_run(const wl_scenario* scenario, wl_run_result** out);
/* Re-evaluates bounds on the trajectories named by the config's
 * "trajectory_csv" key instead of simulating. */
WONHAM_API wl_status wl_scenario_bounds(const wl_scenario* scenario, wl_run_result** out);

/* ---- results ---------------------------------------------------------- */

/* Writes the CSV and a .manifest.json next to it. */
WONHAM_API wl_status wl_run_result_write_csv(const wl_run_result* result, const char* csv_path);
WONHAM_API size_t wl_run_result_paths(const wl_run_result* result);
/* Bound violations across all paths and the aggregate checks. */
WONHAM_API size_t wl_run_result_violations(const wl_run_result* result);
WONHAM_API wl_status wl_run_result_manifest(const wl_run_result* result, char* buffer,
                                            size_t capacity, size_t* required);
WONHAM_API void wl_run_result_destroy(wl_run_result* result);

/* Runs a figure preset and writes <out_dir>/<name>.csv with its manifest. */
WONHAM_API wl_status wl_reproduce_figure(const char* figure, const char* out_dir,
                                         int paper_scale, int workers,
                                         size_t* violations);

#ifdef __cplusplus
}
#endif

#endif /* WONHAM_WONHAM_H */
