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

#include <utility>
#include <vector>

#include "core/types.hpp"

namespace aoico {

// Age thresholds live on the lattice Delta + m for integer m >= 0, where
// Delta = tau + r(tau) + delta(tau) is the post-delivery age. All closed-form
// quantities below are evaluated by summing the per-slot cost along one
// renewal cycle of that lattice.

struct ThresholdSearchLimits {
  // Give up if no threshold is found within this many lattice steps above
  // Delta and the cost curve has not flattened out.
  long long max_offset = 1'000'000;
  // Declare the cost curve flat (bounded cost, possible never-transmit case)
  // after this many consecutive steps with increments below plateau_tol.
  long long plateau_steps = 10'000;
  double plateau_tol = 1e-12;
};

struct ThresholdResult {
  // True when idling forever beats every finite threshold: the transmission
  // charge exceeds what any cycle can recoup from a bounded cost curve.
  bool never_transmit = false;
  long long offset = 0;        // m with H = Delta + m
  double threshold = 0.0;      // H (infinity when never_transmit)
  double extended_threshold = 0.0;  // H + r(tau); ages at which delivery lands
  double reset_age = 0.0;      // Delta
  double avg_cost = 0.0;       // long-run average cost; plateau value if never_transmit
  double utilization = 0.0;    // channel share r / (H + r - Delta); 0 if never_transmit
};

// Long-run average cost of the policy "transmit once age >= H" under channel
// charge tx_cost per busy slot: cycle cost over cycle length. H must sit on
// the age lattice (Delta + integer).
double threshold_cost(const AgentSpec& spec, int tau, double threshold, double tx_cost);

// Marginal value of raising the threshold past `age`: the extra cost a cycle
// absorbs by idling at age rather than transmitting. Defined for ages on the
// lattice at or above Delta - r + 1; zero at the bottom, non-decreasing.
double v_function(const AgentSpec& spec, int tau, double age);

// Channel charge at which threshold H and H+1 tie: v_function(H+1) / r(tau).
// Non-decreasing in H, which is what makes threshold policies indexable.
double whittle_index(const AgentSpec& spec, int tau, double threshold);

// Smallest H >= Delta whose one-step improvement no longer covers the
// transmission charge: minimal m with tx_cost * r <= v_function(Delta+m+1).
// Ties resolve to the smaller threshold.
ThresholdResult optimal_threshold(const AgentSpec& spec, int tau, double tx_cost,
                                  const ThresholdSearchLimits& limits = {});

double utilization(const ThresholdResult& result);

struct TauChoice {
  int tau_star = 0;
  ThresholdResult result;
  // Optimal average cost for each admissible tau, in tau_set order.
  std::vector<std::pair<int, double>> cost_curve;
  bool all_never_transmit = false;
};

// Enumerate tau_set, solve the threshold problem for each, keep the cheapest.
// Exact cost ties go to the smaller tau.
TauChoice best_tau(const AgentSpec& spec, double tx_cost,
                   const ThresholdSearchLimits& limits = {});

// Incremental lattice table of whittle_index values for one (agent, tau);
// grows on demand. The simulator queries it once per scheduling decision.
class WhittleTable {
 public:
  WhittleTable(const AgentSpec& spec, int tau);

  double at_offset(long long m);  // index of threshold Delta + m
  double at_age(double age);      // clamps below Delta, floors onto the lattice

 private:
  void extend(long long m);

  const AgentSpec* spec_;
  int tau_;
  int r_;
  double delta_;
  double sum_ = 0.0;           // running sum of lattice costs
  std::vector<double> lattice_cost_;
  std::vector<double> index_;
};

}  // namespace aoico
