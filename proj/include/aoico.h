/*
 * Copyright (c) 2026 aoico contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef AOICO_H
#define AOICO_H

/*
 * C interface to the aoico toolkit: joint optimization of per-agent
 * processing times and single-channel transmission scheduling for real-time
 * monitoring, with a slot-level simulator and an independent dynamic-
 * programming oracle for every closed-form result.
 *
 * All objects are opaque handles created and destroyed here. Functions
 * return aoico_status; on failure aoico_last_error() describes what went
 * wrong (thread-local, valid until the next failing call on that thread).
 * Strings returned by getters stay owned by their handle and remain valid
 * until the handle is freed.
 */

#include <stdint.h>

#if defined(_WIN32)
#define AOICO_API __declspec(dllexport)
#else
#define AOICO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aoico_status {
  AOICO_OK = 0,
  AOICO_ERR_INVALID_ARGUMENT = 1,
  AOICO_ERR_PARSE = 2,           /* malformed scenario */
  AOICO_ERR_NO_CONVERGENCE = 3,  /* iteration budget exhausted */
  AOICO_ERR_ORACLE_MISMATCH = 4, /* closed form disagrees with the MDP */
  AOICO_ERR_IO = 5,
  AOICO_ERR_INTERNAL = 6
} aoico_status;

typedef struct aoico_scenario aoico_scenario;
typedef struct aoico_solve_result aoico_solve_result;
typedef struct aoico_sim_result aoico_sim_result;
typedef struct aoico_oracle_result aoico_oracle_result;
typedef struct aoico_validate_result aoico_validate_result;

AOICO_API const char* aoico_version(void);
AOICO_API const char* aoico_last_error(void);

/* ---- scenarios ---- */

AOICO_API aoico_status aoico_scenario_load(const char* path, aoico_scenario** out);
AOICO_API aoico_status aoico_scenario_from_json(const char* json_text, const char* name,
                                                aoico_scenario** out);
AOICO_API aoico_status aoico_scenario_to_json(const aoico_scenario* sc,
                                              const char** out_json);
AOICO_API const char* aoico_scenario_name(const aoico_scenario* sc);
AOICO_API int aoico_scenario_agent_count(const aoico_scenario* sc);
AOICO_API void aoico_scenario_free(aoico_scenario* sc);

/* Per-agent closed-form quantities. tau must be admissible for the agent. */
AOICO_API aoico_status aoico_agent_reset_age(const aoico_scenario* sc, int agent,
                                             int tau, double* out);
AOICO_API aoico_status aoico_agent_whittle_index(const aoico_scenario* sc, int agent,
                                                 int tau, double threshold, double* out);
AOICO_API aoico_status aoico_agent_optimal_threshold(const aoico_scenario* sc, int agent,
                                                     int tau, double tx_cost,
                                                     double* out_threshold,
                                                     double* out_avg_cost,
                                                     double* out_utilization);

/* ---- joint processing-time / scheduling optimization ---- */

AOICO_API aoico_status aoico_solve(const aoico_scenario* sc, aoico_solve_result** out);
AOICO_API double aoico_solve_c_star(const aoico_solve_result* r);
AOICO_API double aoico_solve_total_utilization(const aoico_solve_result* r);
AOICO_API double aoico_solve_dual_value(const aoico_solve_result* r);
AOICO_API int aoico_solve_iterations(const aoico_solve_result* r);
AOICO_API int aoico_solve_converged(const aoico_solve_result* r);
AOICO_API int aoico_solve_infeasible(const aoico_solve_result* r);
AOICO_API int aoico_solve_agent_count(const aoico_solve_result* r);
AOICO_API int aoico_solve_tau_star(const aoico_solve_result* r, int agent);
AOICO_API double aoico_solve_threshold(const aoico_solve_result* r, int agent);
AOICO_API double aoico_solve_avg_cost(const aoico_solve_result* r, int agent);
AOICO_API double aoico_solve_utilization(const aoico_solve_result* r, int agent);
AOICO_API const char* aoico_solve_codesign_csv(const aoico_solve_result* r);
AOICO_API const char* aoico_solve_dual_trace_csv(const aoico_solve_result* r);
AOICO_API const char* aoico_solve_summary(const aoico_solve_result* r);
AOICO_API void aoico_solve_free(aoico_solve_result* r);

/* ---- simulation ---- */

typedef struct aoico_sim_options {
  int64_t horizon;       /* <= 0: scenario default */
  int seeds;             /* <= 0: scenario default */
  const char* policies;  /* comma-separated names; NULL: scenario default */
  int use_codesign;      /* nonzero: processing times from aoico_solve */
  int uniform_tau;       /* > 0: that tau for every agent */
  int sweep_lo;          /* both > 0: uniform-tau sweep instead of a plain run */
  int sweep_hi;
  int trace;             /* nonzero: record a decimated event trace */
} aoico_sim_options;

AOICO_API void aoico_sim_options_init(aoico_sim_options* opts);

AOICO_API aoico_status aoico_simulate(const aoico_scenario* sc,
                                      const aoico_sim_options* opts,
                                      aoico_sim_result** out);
AOICO_API const char* aoico_sim_rows_csv(const aoico_sim_result* r);
AOICO_API const char* aoico_sim_comparison_csv(const aoico_sim_result* r);
AOICO_API const char* aoico_sim_sweep_csv(const aoico_sim_result* r);
AOICO_API const char* aoico_sim_trace_csv(const aoico_sim_result* r);
AOICO_API const char* aoico_sim_summary(const aoico_sim_result* r);
AOICO_API void aoico_sim_free(aoico_sim_result* r);

/* ---- dynamic-programming oracle ---- */

AOICO_API aoico_status aoico_oracle_check(const aoico_scenario* sc, int agent, int tau,
                                          double tx_cost, int64_t age_cap,
                                          double vi_tol, aoico_oracle_result** out);
AOICO_API int aoico_oracle_pass(const aoico_oracle_result* r);
AOICO_API int aoico_oracle_boundary_tie(const aoico_oracle_result* r);
AOICO_API double aoico_oracle_closed_threshold(const aoico_oracle_result* r);
AOICO_API double aoico_oracle_closed_avg_cost(const aoico_oracle_result* r);
AOICO_API double aoico_oracle_mdp_threshold(const aoico_oracle_result* r);
AOICO_API double aoico_oracle_mdp_avg_cost(const aoico_oracle_result* r);
AOICO_API const char* aoico_oracle_table_csv(const aoico_oracle_result* r);
AOICO_API const char* aoico_oracle_summary(const aoico_oracle_result* r);
AOICO_API void aoico_oracle_free(aoico_oracle_result* r);

/* ---- invariant suite ---- */

AOICO_API aoico_status aoico_validate(const aoico_scenario* sc,
                                      aoico_validate_result** out);
AOICO_API int aoico_validate_ok(const aoico_validate_result* r);
AOICO_API const char* aoico_validate_report(const aoico_validate_result* r);
AOICO_API void aoico_validate_free(aoico_validate_result* r);

#ifdef __cplusplus
}
#endif

#endif /* AOICO_H */
