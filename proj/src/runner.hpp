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
#pragma once

#include "io/scenario.hpp"
#include "oracle/mdp.hpp"
#include "sim/engine.hpp"

namespace aoico {

// Command-level entry points shared by the C API and the CLI. Each returns
// finished CSV/text payloads; writing files is the caller's business.

struct SolveOutput {
  CodesignResult result;
  bool infeasible = false;  // every agent priced off the channel at c_star
  std::string codesign_csv;   // agent,tau_star,H_star,lambda,utilization
  std::string dual_trace_csv; // iteration,C,f,dual
  std::string summary;
};
SolveOutput run_solve(const Scenario& scenario);

struct SimulateOverrides {
  long long horizon = 0;               // 0 = scenario value
  int seeds = 0;                       // 0 = scenario value
  std::vector<std::string> policies;   // empty = scenario value
  bool use_codesign = false;           // resolve taus by running solve first
  int uniform_tau = 0;                 // >0 = same tau for every agent
  bool trace = false;
};
struct SimulateOutput {
  std::vector<SimReport> reports;
  std::vector<ComparisonRow> comparison;
  std::string rows_csv;        // scenario,policy,seed,T,agent,tau,time_avg_cost,mean_aoi,utilization
  std::string comparison_csv;  // policy,seeds,mean_total_cost,stderr,improvement_of_whittle_pct
  std::string trace_csv;       // t,agent,aoi,z,event (decimated; empty unless tracing)
  std::string summary;
};
SimulateOutput run_simulate(const Scenario& scenario, const SimulateOverrides& ov = {});

struct SweepOverrides {
  int tau_lo = 1;
  int tau_hi = 12;
  long long horizon = 0;
  int seeds = 0;
  bool with_codesign = true;  // add optimized-tau reference rows (tau = -1)
};
struct SweepOutput {
  std::string sweep_csv;  // tau,policy,mean_cost,stderr
  std::string summary;
  // Improvement of optimized-tau Whittle over the best uniform-tau entry of
  // each baseline policy, in percent.
  std::vector<std::pair<std::string, double>> improvements;
};
SweepOutput run_sweep(const Scenario& scenario, const SweepOverrides& ov = {});

struct OracleOverrides {
  long long age_cap = 0;  // 0 = auto-sized from the closed form
  double vi_tol = 1e-9;
};
struct OracleOutput {
  double closed_threshold = 0.0;
  double closed_avg_cost = 0.0;
  double oracle_threshold = 0.0;
  double oracle_avg_cost = 0.0;
  double tolerance = 0.0;       // |avg cost| comparison tolerance actually applied
  long long threshold_diff = 0; // lattice steps between the two thresholds
  bool boundary_tie = false;    // charge sits on an index boundary; diff <= 1 allowed
  bool structure_ok = false;    // oracle policy is a clean threshold rule
  bool pass = false;
  std::string table_csv;        // age,differential,action
  std::string summary;
};
OracleOutput run_oracle(const Scenario& scenario, int agent, int tau, double tx_cost,
                        const OracleOverrides& ov = {});

struct ValidateOutput {
  bool ok = false;
  std::string report;
};
ValidateOutput run_validate(const Scenario& scenario);

}  // namespace aoico
