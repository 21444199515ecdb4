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

#include <span>
#include <vector>

#include "solver/threshold.hpp"

namespace aoico {

// Single-channel coupling handled by pricing: a per-slot channel charge C is
// raised until the decoupled per-agent optima jointly fit the channel
// (total utilization <= 1). The per-agent response f_i(C) is piecewise
// constant and non-increasing, so the stopping rule accepts the smallest
// charge whose response fits, not an exact |f - 1| match.

enum class OptMode { DualAscent, Bisection, Hybrid };

struct OptimizerConfig {
  double c_init = 0.0;
  double step = 1.0;        // dual ascent step on (f - 1)
  double util_tol = 1e-3;   // |total utilization - 1| considered converged
  int max_iterations = 10000;
  OptMode mode = OptMode::Hybrid;
  double c_tol = 1e-9;      // relative bracket width for bisection
  ThresholdSearchLimits search;
};

struct IterationRecord {
  int iteration = 0;
  double tx_cost = 0.0;
  double total_utilization = 0.0;
  double dual_value = 0.0;
};

struct CodesignResult {
  double c_star = 0.0;
  std::vector<TauChoice> choices;   // per agent, at c_star
  double total_utilization = 0.0;
  double dual_value = 0.0;          // sum of decoupled costs minus c_star
  int iterations = 0;               // pricing evaluations performed
  bool converged = false;
  double utilization_gap = 0.0;     // 1 - total utilization at c_star
  bool all_never_transmit = false;  // every agent priced off the channel
  std::vector<IterationRecord> trace;
};

// Decoupled per-agent optima at a fixed channel charge.
std::vector<TauChoice> decoupled_choices(std::span<const AgentSpec> agents,
                                         double tx_cost,
                                         const ThresholdSearchLimits& limits = {});

double total_utilization(const std::vector<TauChoice>& choices);

// Lower bound on the joint achievable cost: sum of decoupled optima minus the
// charge rebate. Valid for any tx_cost >= 0.
double dual_value(std::span<const AgentSpec> agents, double tx_cost,
                  const ThresholdSearchLimits& limits = {});

CodesignResult optimize(std::span<const AgentSpec> agents, const OptimizerConfig& cfg = {});

}  // namespace aoico
