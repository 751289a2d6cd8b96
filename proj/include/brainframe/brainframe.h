/*
 * C interface to the brainframe simulation and planning library.
 *
 * Objects are opaque handles produced by the *_from_json, *_read_csv,
 * *_generate and bf_calibrate functions and released with the matching
 * *_free. Every fallible call returns a
 * bf_status; on failure bf_last_error() describes the problem for the
 * calling thread. Strings returned through char** out-parameters are
 * heap-allocated and must be released with bf_string_free.
 */
#ifndef BRAINFRAME_H
#define BRAINFRAME_H

#include <stddef.h>
#include <stdint.h>

#if defined(BRAINFRAME_BUILDING_LIBRARY)
#  define BF_API __attribute__((visibility("default")))
#else
#  define BF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 2-4 double as CLI exit codes. */
typedef enum bf_status {
    BF_OK = 0,
    BF_ERR_INVALID_ARGUMENT = 1,
    BF_ERR_CONFIG = 2,
    BF_ERR_DIVERGENCE = 3,
    BF_ERR_COVERAGE = 4,
    BF_ERR_PARSE = 5,
    BF_ERR_INPUT_SHAPE = 6,
    BF_ERR_NUMERIC_DOMAIN = 7,
    BF_ERR_IO = 8,
    BF_ERR_INTERNAL = 9
} bf_status;

typedef struct bf_config bf_config;
typedef struct bf_trace bf_trace;
typedef struct bf_matrix bf_matrix;
typedef struct bf_calibration bf_calibration;

BF_API const char* bf_version(void);

/* Message of the last failed call on this thread ("" if none). */
BF_API const char* bf_last_error(void);
/* Step index of the last divergence error on this thread, or -1. */
BF_API int64_t bf_last_divergence_step(void);

BF_API void bf_string_free(char* s);

/* ---- simulation ------------------------------------------------------- */

/* Parses a simulation config document (JSON). Relative matrix paths are
 * resolved against base_dir, which may be NULL. */
BF_API bf_status bf_config_from_json(const char* json, const char* base_dir, bf_config** out);
/* Sets the backend: workers == 0 selects the sequential backend. */
BF_API bf_status bf_config_set_workers(bf_config* config, size_t workers);
BF_API bf_status bf_config_digest(const bf_config* config, char** out);
BF_API void bf_config_free(bf_config* config);

BF_API bf_status bf_simulate(const bf_config* config, bf_trace** out);

BF_API size_t bf_trace_row_count(const bf_trace* trace);
BF_API bf_status bf_trace_row(const bf_trace* trace, size_t index, int64_t* step, uint32_t* neuron,
                              double* vaxon_mv);
/* {"config_digest", "rows", "recorded_steps", "recorded_neurons",
 *  "timing": {"steps", "min_s", "mean_s", "max_s"}} */
BF_API bf_status bf_trace_summary_json(const bf_trace* trace, char** out);
BF_API bf_status bf_trace_to_csv(const bf_trace* trace, char** out);
BF_API bf_status bf_trace_write_csv(const bf_trace* trace, const char* path);
BF_API bf_status bf_trace_read_csv(const char* path, bf_trace** out);
BF_API void bf_trace_free(bf_trace* trace);

/* ---- connectivity ----------------------------------------------------- */

/* spec_json: {"kind": "all_to_all" | "fixed_density" | "from_file", ...} as
 * in the simulation config's "connectivity" block. */
BF_API bf_status bf_matrix_generate(const char* spec_json, size_t n, bf_matrix** out);
BF_API bf_status bf_matrix_read_csv(const char* path, bf_matrix** out);
BF_API bf_status bf_matrix_write_csv(const bf_matrix* matrix, const char* path);
BF_API size_t bf_matrix_size(const bf_matrix* matrix);
BF_API double bf_matrix_density(const bf_matrix* matrix);
BF_API double bf_matrix_at(const bf_matrix* matrix, size_t row, size_t col);
BF_API void bf_matrix_free(bf_matrix* matrix);

/* ---- workload profile ------------------------------------------------- */

/* use_case: "rgj" | "sgj" | "ngj". dfe_model_json may be NULL for the
 * default tick model. When measure_steps > 0 the instrumented engine runs
 * that many steps on the matching network (all-to-all for density 1,
 * otherwise fixed density with the given seed) and the result gains a
 * "measured" block. */
BF_API bf_status bf_profile_json(const char* use_case, uint64_t n, double density,
                                 const char* dfe_model_json, int64_t measure_steps, uint64_t seed,
                                 char** out);

/* ---- selection -------------------------------------------------------- */

BF_API bf_status bf_calibration_read_csv(const char* path, bf_calibration** out);
BF_API bf_status bf_calibration_from_csv_text(const char* text, bf_calibration** out);
BF_API bf_status bf_calibration_write_csv(const bf_calibration* cal, const char* path);
BF_API size_t bf_calibration_size(const bf_calibration* cal);
BF_API void bf_calibration_free(bf_calibration* cal);

/* experiment_json: {"use_case", "n", "density", "real_time"}. cal may be
 * NULL. Output: {"fabric", "reason", "predicted_sec_per_step"}; with
 * include_details != 0 also "class" and "rt_max_network". */
BF_API bf_status bf_select_json(const char* experiment_json, const bf_calibration* cal,
                                int include_details, char** out);

/* Largest real-time network; *found = 0 when none is achievable. */
BF_API bf_status bf_rt_max_network(const char* fabric, const char* use_case, double density,
                                   const bf_calibration* cal, int* found, uint64_t* cells);

/* ---- planning --------------------------------------------------------- */

/* batch_json: list of experiments (with "brain_seconds"). Writes the JSON
 * report to *out_json and, if out_text is not NULL, a text table to
 * *out_text. */
BF_API bf_status bf_plan(const char* batch_json, const bf_calibration* cal, int allow_rule_fallback,
                         char** out_json, char** out_text);

/* ---- calibration sweep ------------------------------------------------ */

/* sweep_json: see CalibrationSweep ({"label", "workers", "cases", ...}).
 * progress may be NULL. */
typedef void (*bf_progress_fn)(const char* use_case, double density, uint64_t n,
                               double sec_per_step, void* user);
BF_API bf_status bf_calibrate(const char* sweep_json, bf_progress_fn progress, void* user,
                              bf_calibration** out);

#ifdef __cplusplus
}
#endif

#endif /* BRAINFRAME_H */
