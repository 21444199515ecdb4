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
#include "aoico.h"

#include <sstream>
#include <string>

#include "runner.hpp"

using namespace aoico;

namespace {

thread_local std::string g_last_error;

aoico_status set_error(aoico_status st, const char* what) {
  g_last_error = what ? what : "unknown error";
  return st;
}

// Every entry point funnels through here so exceptions map to status codes
// exactly once.
template <typename Fn>
aoico_status guarded(Fn&& fn) {
  try {
    fn();
    return AOICO_OK;
  } catch (const ParseError& e) {
    return set_error(AOICO_ERR_PARSE, e.what());
  } catch (const ConvergenceError& e) {
    return set_error(AOICO_ERR_NO_CONVERGENCE, e.what());
  } catch (const DomainError& e) {
    return set_error(AOICO_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return set_error(AOICO_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(AOICO_ERR_INTERNAL, "unknown error");
  }
}

std::vector<std::string> split_csv_list(const char* s) {
  std::vector<std::string> out;
  if (!s) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

struct aoico_scenario {
  Scenario sc;
  mutable std::string json_cache;
};

struct aoico_solve_result {
  SolveOutput out;
};

struct aoico_sim_result {
  std::string rows_csv;
  std::string comparison_csv;
  std::string sweep_csv;
  std::string trace_csv;
  std::string summary;
};

struct aoico_oracle_result {
  OracleOutput out;
};

struct aoico_validate_result {
  ValidateOutput out;
};

namespace {

const TauChoice* choice_at(const aoico_solve_result* r, int agent) {
  if (!r || agent < 0 || static_cast<size_t>(agent) >= r->out.result.choices.size())
    return nullptr;
  return &r->out.result.choices[static_cast<size_t>(agent)];
}

}  // namespace

extern "C" {

const char* aoico_version(void) { return "0.1.0"; }

const char* aoico_last_error(void) { return g_last_error.c_str(); }

aoico_status aoico_scenario_load(const char* path, aoico_scenario** out) {
  if (!path || !out) return set_error(AOICO_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto* h = new aoico_scenario{load_scenario(path), {}};
    *out = h;
  });
}

aoico_status aoico_scenario_from_json(const char* json_text, const char* name,
                                      aoico_scenario** out) {
  if (!json_text || !out) return set_error(AOICO_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto* h = new aoico_scenario{
        parse_scenario(json_text, name ? name : "scenario"), {}};
    *out = h;
  });
}

aoico_status aoico_scenario_to_json(const aoico_scenario* sc, const char** out_json) {
  if (!sc || !out_json) return set_error(AOICO_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    sc->json_cache = emit_scenario(sc->sc);
    *out_json = sc->json_cache.c_str();
  });
}

const char* aoico_scenario_name(const aoico_scenario* sc) {
  return sc ? sc->sc.name.c_str() : "";
}

int aoico_scenario_agent_count(const aoico_scenario* sc) {
  return sc ? static_cast<int>(sc->sc.agents.size()) : 0;
}

void aoico_scenario_free(aoico_scenario* sc) { delete sc; }

aoico_status aoico_agent_reset_age(const aoico_scenario* sc, int agent, int tau,
                                   double* out) {
  if (!sc || !out) return set_error(AOICO_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    if (agent < 0 || static_cast<size_t>(agent) >= sc->sc.agents.size())
      throw DomainError("agent index out of range");
    *out = reset_age(sc->sc.agents[static_cast<size_t>(agent)], tau);
  });
}

aoico_status aoico_agent_whittle_index(const aoico_scenario* sc, int agent, int tau,
                                       double threshold, double* out) {
  if (!sc || !out) return set_error(AOICO_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    if (agent < 0 || static_cast<size_t>(agent) >= sc->sc.agents.size())
      throw DomainError("agent index out of range");
    *out = whittle_index(sc->sc.agents[static_cast<size_t>(agent)], tau, threshold);
  });
}

aoico_status aoico_agent_optimal_threshold(const aoico_scenario* sc, int agent, int tau,
                                           double tx_cost, double* out_threshold,
                                           double* out_avg_cost,
                                           double* out_utilization) {
  if (!sc) return set_error(AOICO_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    if (agent < 0 || static_cast<size_t>(agent) >= sc->sc.agents.size())
      throw DomainError("agent index out of range");
    ThresholdResult r =
        optimal_threshold(sc->sc.agents[static_cast<size_t>(agent)], tau, tx_cost);
    if (out_threshold) *out_threshold = r.threshold;
    if (out_avg_cost) *out_avg_cost = r.avg_cost;
    if (out_utilization) *out_utilization = r.utilization;
  });
}

aoico_status aoico_solve(const aoico_scenario* sc, aoico_solve_result** out) {
  if (!sc || !out) return set_error(AOICO_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new aoico_solve_result{run_solve(sc->sc)}; });
}

double aoico_solve_c_star(const aoico_solve_result* r) { return r->out.result.c_star; }
double aoico_solve_total_utilization(const aoico_solve_result* r) {
  return r->out.result.total_utilization;
}
double aoico_solve_dual_value(const aoico_solve_result* r) {
  return r->out.result.dual_value;
}
int aoico_solve_iterations(const aoico_solve_result* r) {
  return r->out.result.iterations;
}
int aoico_solve_converged(const aoico_solve_result* r) {
  return r->out.result.converged ? 1 : 0;
}
int aoico_solve_infeasible(const aoico_solve_result* r) {
  return r->out.infeasible ? 1 : 0;
}
int aoico_solve_agent_count(const aoico_solve_result* r) {
  return static_cast<int>(r->out.result.choices.size());
}

int aoico_solve_tau_star(const aoico_solve_result* r, int agent) {
  const TauChoice* c = choice_at(r, agent);
  return c ? c->tau_star : -1;
}
double aoico_solve_threshold(const aoico_solve_result* r, int agent) {
  const TauChoice* c = choice_at(r, agent);
  return c ? c->result.threshold : 0.0;
}
double aoico_solve_avg_cost(const aoico_solve_result* r, int agent) {
  const TauChoice* c = choice_at(r, agent);
  return c ? c->result.avg_cost : 0.0;
}
double aoico_solve_utilization(const aoico_solve_result* r, int agent) {
  const TauChoice* c = choice_at(r, agent);
  return c ? c->result.utilization : 0.0;
}
const char* aoico_solve_codesign_csv(const aoico_solve_result* r) {
  return r->out.codesign_csv.c_str();
}
const char* aoico_solve_dual_trace_csv(const aoico_solve_result* r) {
  return r->out.dual_trace_csv.c_str();
}
const char* aoico_solve_summary(const aoico_solve_result* r) {
  return r->out.summary.c_str();
}
void aoico_solve_free(aoico_solve_result* r) { delete r; }

void aoico_sim_options_init(aoico_sim_options* opts) {
  if (!opts) return;
  opts->horizon = 0;
  opts->seeds = 0;
  opts->policies = nullptr;
  opts->use_codesign = 0;
  opts->uniform_tau = 0;
  opts->sweep_lo = 0;
  opts->sweep_hi = 0;
  opts->trace = 0;
}

aoico_status aoico_simulate(const aoico_scenario* sc, const aoico_sim_options* opts,
                            aoico_sim_result** out) {
  if (!sc || !out) return set_error(AOICO_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    aoico_sim_options defaults;
    aoico_sim_options_init(&defaults);
    const aoico_sim_options& o = opts ? *opts : defaults;
    auto h = std::make_unique<aoico_sim_result>();
    if (o.sweep_lo > 0 && o.sweep_hi > 0) {
      SweepOverrides ov;
      ov.tau_lo = o.sweep_lo;
      ov.tau_hi = o.sweep_hi;
      ov.horizon = o.horizon > 0 ? o.horizon : 0;
      ov.seeds = o.seeds > 0 ? o.seeds : 0;
      SweepOutput sw = run_sweep(sc->sc, ov);
      h->sweep_csv = std::move(sw.sweep_csv);
      h->summary = std::move(sw.summary);
    } else {
      SimulateOverrides ov;
      ov.horizon = o.horizon > 0 ? o.horizon : 0;
      ov.seeds = o.seeds > 0 ? o.seeds : 0;
      ov.policies = split_csv_list(o.policies);
      ov.use_codesign = o.use_codesign != 0;
      ov.uniform_tau = o.uniform_tau;
      ov.trace = o.trace != 0;
      SimulateOutput so = run_simulate(sc->sc, ov);
      h->rows_csv = std::move(so.rows_csv);
      h->comparison_csv = std::move(so.comparison_csv);
      h->trace_csv = std::move(so.trace_csv);
      h->summary = std::move(so.summary);
    }
    *out = h.release();
  });
}

const char* aoico_sim_rows_csv(const aoico_sim_result* r) { return r->rows_csv.c_str(); }
const char* aoico_sim_comparison_csv(const aoico_sim_result* r) {
  return r->comparison_csv.c_str();
}
const char* aoico_sim_sweep_csv(const aoico_sim_result* r) { return r->sweep_csv.c_str(); }
const char* aoico_sim_trace_csv(const aoico_sim_result* r) { return r->trace_csv.c_str(); }
const char* aoico_sim_summary(const aoico_sim_result* r) { return r->summary.c_str(); }
void aoico_sim_free(aoico_sim_result* r) { delete r; }

aoico_status aoico_oracle_check(const aoico_scenario* sc, int agent, int tau,
                                double tx_cost, int64_t age_cap, double vi_tol,
                                aoico_oracle_result** out) {
  if (!sc || !out) return set_error(AOICO_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    OracleOverrides ov;
    ov.age_cap = age_cap > 0 ? age_cap : 0;
    ov.vi_tol = vi_tol > 0.0 ? vi_tol : 1e-9;
    *out = new aoico_oracle_result{run_oracle(sc->sc, agent, tau, tx_cost, ov)};
  });
}

int aoico_oracle_pass(const aoico_oracle_result* r) { return r->out.pass ? 1 : 0; }
int aoico_oracle_boundary_tie(const aoico_oracle_result* r) {
  return r->out.boundary_tie ? 1 : 0;
}
double aoico_oracle_closed_threshold(const aoico_oracle_result* r) {
  return r->out.closed_threshold;
}
double aoico_oracle_closed_avg_cost(const aoico_oracle_result* r) {
  return r->out.closed_avg_cost;
}
double aoico_oracle_mdp_threshold(const aoico_oracle_result* r) {
  return r->out.oracle_threshold;
}
double aoico_oracle_mdp_avg_cost(const aoico_oracle_result* r) {
  return r->out.oracle_avg_cost;
}
const char* aoico_oracle_table_csv(const aoico_oracle_result* r) {
  return r->out.table_csv.c_str();
}
const char* aoico_oracle_summary(const aoico_oracle_result* r) {
  return r->out.summary.c_str();
}
void aoico_oracle_free(aoico_oracle_result* r) { delete r; }

aoico_status aoico_validate(const aoico_scenario* sc, aoico_validate_result** out) {
  if (!sc || !out) return set_error(AOICO_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new aoico_validate_result{run_validate(sc->sc)}; });
}

int aoico_validate_ok(const aoico_validate_result* r) { return r->out.ok ? 1 : 0; }
const char* aoico_validate_report(const aoico_validate_result* r) {
  return r->out.report.c_str();
}
void aoico_validate_free(aoico_validate_result* r) { delete r; }

}  // extern "C"
