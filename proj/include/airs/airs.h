/* SPDX-License-Identifier: Apache-2.0 */
#ifndef AIRS_AIRS_H
#define AIRS_AIRS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(AIRS_BUILDING_LIBRARY)
#    define AIRS_API __declspec(dllexport)
#  else
#    define AIRS_API __declspec(dllimport)
#  endif
#else
#  define AIRS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns one of these. On failure a message is kept per
 * thread and can be read with airs_last_error() until the next failing call
 * on the same thread. */
typedef enum airs_status {
  AIRS_OK = 0,
  AIRS_ERR_INVALID_ARGUMENT = 1,
  AIRS_ERR_DIMENSION = 2,
  AIRS_ERR_INFEASIBLE = 3,
  AIRS_ERR_NUMERICAL = 4,
  AIRS_ERR_IO = 5,
  AIRS_ERR_INTERNAL = 6
} airs_status;

AIRS_API const char* airs_last_error(void);
AIRS_API const char* airs_version(void);
AIRS_API const char* airs_status_name(airs_status status);

/* ---- configuration ---------------------------------------------------- */

typedef struct airs_config airs_config;

AIRS_API airs_status airs_config_table1(airs_config** out);
/* Small single-RSU, single-vehicle instance used by the oracle check. */
AIRS_API airs_status airs_config_toy(airs_config** out);
AIRS_API airs_status airs_config_from_json(const char* json, airs_config** out);
AIRS_API airs_status airs_config_load(const char* path, airs_config** out);
/* *out is allocated by the library; release it with airs_string_free. */
AIRS_API airs_status airs_config_to_json(const airs_config* cfg, char** out);
/* Integer fields: I, K, J, M, N. */
AIRS_API airs_status airs_config_set_int(airs_config* cfg, const char* key, int value);
AIRS_API airs_status airs_config_get_int(const airs_config* cfg, const char* key, int* value);
AIRS_API void airs_config_free(airs_config* cfg);
AIRS_API void airs_string_free(char* s);

/* ---- single runs ------------------------------------------------------ */

typedef struct airs_run_options {
  int max_outer_iters;
  double conv_tol;
  uint64_t seed;
  double mono_tol;
  double tol_feas;
  double solver_tol;
  int solver_max_iter;
  int record_timing; /* 0 writes zero wall times, for reproducible output */
} airs_run_options;

AIRS_API void airs_run_options_default(airs_run_options* opt);

typedef struct airs_result airs_result;

typedef struct airs_trace_record {
  int iter;
  double sum_rate;
  double rho;
  double max_violation;
  double wall_ms;
} airs_trace_record;

/* scheme: proposed, fixed_trajectory, random_phase, fixed_power, fixed_rho,
 * no_airs. opt may be NULL for the defaults. */
AIRS_API airs_status airs_run(const airs_config* cfg, const char* scheme,
                              const airs_run_options* opt, airs_result** out);
AIRS_API double airs_result_sum_rate(const airs_result* r);
AIRS_API double airs_result_rho(const airs_result* r);
AIRS_API int airs_result_iterations(const airs_result* r);
AIRS_API int airs_result_converged(const airs_result* r);
AIRS_API size_t airs_result_trace_length(const airs_result* r);
AIRS_API airs_status airs_result_trace(const airs_result* r, size_t index, airs_trace_record* out);
AIRS_API size_t airs_result_slots(const airs_result* r);
/* xyz receives 3 * airs_result_slots(r) values, slot by slot. */
AIRS_API airs_status airs_result_trajectory(const airs_result* r, double* xyz, size_t len);
AIRS_API double airs_result_hover_distance(const airs_result* r, int initial);
AIRS_API airs_status airs_result_write_convergence_csv(const airs_result* r, const char* path);
AIRS_API airs_status airs_result_write_trajectory_csv(const airs_result* r, const char* path);
AIRS_API void airs_result_free(airs_result* r);

/* ---- sweeps ----------------------------------------------------------- */

typedef struct airs_sweep airs_sweep;

typedef struct airs_sweep_row {
  double axis_value;
  const char* scheme; /* owned by the sweep handle */
  int ok;
  double sum_rate;
  double iters;
  double wall_ms;
} airs_sweep_row;

/* axis is 'M' or 'T'. schemes may be NULL (with n_schemes 0) for all six. */
AIRS_API airs_status airs_sweep_run(const airs_config* cfg, char axis, const double* values,
                                    size_t n_values, const char* const* schemes,
                                    size_t n_schemes, const airs_run_options* opt,
                                    int workers, airs_sweep** out);
AIRS_API size_t airs_sweep_rows(const airs_sweep* s);
AIRS_API airs_status airs_sweep_row_at(const airs_sweep* s, size_t index, airs_sweep_row* out);
AIRS_API airs_status airs_sweep_write_csv(const airs_sweep* s, const char* path);
AIRS_API void airs_sweep_free(airs_sweep* s);

/* ---- oracle comparison ------------------------------------------------ */

typedef struct airs_oracle_report {
  double ao_sum_rate;
  double grid_sum_rate;
  double ratio;
  int ao_feasible;
  double rho_refined;
  double rho_scan;
  int passed;
} airs_oracle_report;

/* cfg may be NULL for the toy instance. */
AIRS_API airs_status airs_oracle_check(const airs_config* cfg, const airs_run_options* opt,
                                       airs_oracle_report* out);

#ifdef __cplusplus
}
#endif

#endif /* AIRS_AIRS_H */
