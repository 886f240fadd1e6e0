/*
 * C interface to the self-triggered-control synthesis and simulation
 * library.  All entry points return an stc_status; on failure a
 * human-readable message is available from stc_last_error() (thread-local,
 * valid until the next failing call on the same thread).
 *
 * Status codes double as the CLI exit codes:
 *   0 success, 1 internal error, 2 configuration error, 3 synthesis
 *   failure, 4 verification failure, 5 coverage error.
 */
#ifndef STC_H
#define STC_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef STC_API
#define STC_API __attribute__((visibility("default")))
#endif

typedef enum stc_status {
  STC_OK = 0,
  STC_ERROR_INTERNAL = 1,
  STC_ERROR_CONFIG = 2,
  STC_ERROR_SYNTHESIS = 3,
  STC_ERROR_VERIFICATION = 4,
  STC_ERROR_COVERAGE = 5
} stc_status;

/* Opaque handles. */
typedef struct stc_config stc_config;
typedef struct stc_artifact stc_artifact;

typedef struct stc_run_stats {
  long samplings;
  double min_dwell;
  double max_trigger;
  int coverage_ok; /* 0 when the run was aborted by a coverage failure */
} stc_run_stats;

typedef struct stc_benchmark_summary {
  double mean_region;
  double mean_baseline;
  double mean_etc;
  double min_dwell_region;
  double max_trigger_region;
  int runs;
  int flagged; /* region runs aborted by coverage failures */
} stc_benchmark_summary;

STC_API const char* stc_version(void);
STC_API const char* stc_last_error(void);
/* Frees strings returned through char** out-parameters. */
STC_API void stc_string_free(char* s);

/* ── Configuration ──────────────────────────────────────────────────────── */
STC_API stc_status stc_config_load_file(const char* path, stc_config** out);
STC_API stc_status stc_config_load_string(const char* json_text, stc_config** out);
STC_API void stc_config_free(stc_config* cfg);
/* Benchmark initial-condition seed. */
STC_API stc_status stc_config_set_seed(stc_config* cfg, uint64_t seed);
/* Constraint-sampling / verification seed. */
STC_API stc_status stc_config_set_synthesis_seed(stc_config* cfg, uint64_t seed);
/* Integrator step (seconds). */
STC_API stc_status stc_config_set_step(stc_config* cfg, double h);

/* ── Synthesis and artifacts ────────────────────────────────────────────── */
/* report_json (nullable) receives a JSON summary of the synthesis run
 * (coefficients, margin, radius, grid, coverage); free with
 * stc_string_free. */
STC_API stc_status stc_synthesize(const stc_config* cfg, stc_artifact** out,
                                  char** report_json);
STC_API stc_status stc_artifact_load(const char* path, stc_artifact** out);
STC_API stc_status stc_artifact_save(const stc_artifact* art, const char* path);
STC_API void stc_artifact_free(stc_artifact* art);
STC_API stc_status stc_artifact_to_json(const stc_artifact* art, char** json_out);
/* Scalar fields: delta0 delta1 eps_delta margin r w_lo w_hi alpha theta
 * tau1 ratio q sigma epsilon. */
STC_API stc_status stc_artifact_get(const stc_artifact* art, const char* key, double* out);

/* ── Region queries (x is the plant state on the w = 1 slice) ───────────── */
STC_API stc_status stc_tau_down(const stc_artifact* art, const double* x, int n, double w,
                                double* out);
STC_API stc_status stc_region_index(const stc_artifact* art, const double* x, int n,
                                    int* out);
STC_API stc_status stc_region_dwell(const stc_artifact* art, const double* x, int n,
                                    double* out);

/* ── Runs ───────────────────────────────────────────────────────────────── */
/* csv_path may be NULL to skip writing the per-run table. */
STC_API stc_status stc_benchmark_run(const stc_config* cfg, const stc_artifact* art,
                                     const char* csv_path, int workers,
                                     stc_benchmark_summary* out);
/* scheme: "region-stc", "baseline-stc" or "etc". */
STC_API stc_status stc_simulate_run(const stc_config* cfg, const stc_artifact* art,
                                    const double* x0, int n, const char* scheme,
                                    stc_run_stats* out);
/* report_json receives the property-suite report (free with
 * stc_string_free); all_pass receives 1/0. Returns STC_ERROR_VERIFICATION
 * when a suite fails. */
STC_API stc_status stc_verify_run(const stc_config* cfg, const stc_artifact* art,
                                  char** report_json, int* all_pass);
STC_API stc_status stc_plot_data(const stc_config* cfg, const stc_artifact* art,
                                 const double* x0, int n, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* STC_H */
