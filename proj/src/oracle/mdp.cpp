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
#include "oracle/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/cost.hpp"

namespace aoico {

MdpSolution solve_mdp(const AgentSpec& spec, int tau, double tx_cost,
                      const MdpOptions& opts) {
  if (tx_cost < 0.0) throw DomainError("solve_mdp: negative tx_cost");
  if (opts.eta <= 0.0 || opts.eta > 1.0)
    throw DomainError("solve_mdp: eta must lie in (0, 1]");

  const int r = spec.tx(tau);
  const double delta = reset_age(spec, tau);
  const long long cap =
      opts.age_cap_offset >= 0 ? opts.age_cap_offset
                               : std::max<long long>(200, 50LL * r);
  if (cap < 1) throw DomainError("solve_mdp: age cap must be >= 1");
  const size_t n = static_cast<size_t>(cap) + 1;

  // Stage data. Transmitting from offset m occupies r slots, paying the ages
  // swept through (saturated at the cap) plus the channel charge, and lands
  // at offset 0. Idling pays the current age for one slot.
  std::vector<double> idle_cost(n), tx_total(n);
  for (size_t m = 0; m < n; ++m) {
    idle_cost[m] = spec.cost_at(tau, delta + static_cast<double>(m));
  }
  for (size_t m = 0; m < n; ++m) {
    double s = tx_cost * r;
    for (int k = 0; k < r; ++k) {
      size_t idx = std::min(m + static_cast<size_t>(k), n - 1);
      s += idle_cost[idx];
    }
    tx_total[m] = s;
  }

  // Uniformized stage costs and transitions: decisions of length d become
  // cost/d per slot with a self-loop of weight 1 - eta/d, which breaks the
  // periodicity of the age walk without moving the optimal gain.
  const double eta = opts.eta;
  std::vector<double> v(n, 0.0), w(n, 0.0);
  double span = std::numeric_limits<double>::infinity();
  double lo = 0.0, hi = 0.0;
  long long it = 0;
  for (; it < opts.max_iterations; ++it) {
    for (size_t m = 0; m < n; ++m) {
      size_t up = std::min(m + 1, n - 1);
      double stay = idle_cost[m] + eta * v[up] + (1.0 - eta) * v[m];
      double go = tx_total[m] / r + (eta / r) * v[0] + (1.0 - eta / r) * v[m];
      w[m] = std::min(stay, go);
    }
    lo = std::numeric_limits<double>::infinity();
    hi = -std::numeric_limits<double>::infinity();
    for (size_t m = 0; m < n; ++m) {
      double g = w[m] - v[m];
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    span = hi - lo;
    // Re-anchor so values stay bounded.
    double shift = w[0];
    for (size_t m = 0; m < n; ++m) v[m] = w[m] - shift;
    // The tolerance reads relative to the gain once costs are large: the
    // differential values grow with cost x cycle length and their rounding
    // noise alone can exceed an absolute 1e-9 span.
    if (span <= opts.vi_tol * std::max(1.0, std::fabs(0.5 * (lo + hi)))) {
      ++it;
      break;
    }
  }
  if (span > opts.vi_tol * std::max(1.0, std::fabs(0.5 * (lo + hi))))
    throw ConvergenceError("solve_mdp: value iteration span " + std::to_string(span) +
                           " above tolerance after " + std::to_string(it) +
                           " sweeps");

  MdpSolution sol;
  sol.avg_cost = 0.5 * (lo + hi);
  sol.reset_age = delta;
  sol.tx_len = r;
  sol.iterations = it;
  sol.span_at_stop = span;
  sol.age_cap_offset = cap;

  // Undo the transformation's 1/eta scaling on relative values.
  sol.differential.resize(n);
  for (size_t m = 0; m < n; ++m) sol.differential[m] = eta * v[m];

  // Greedy actions against the untransformed stage equation: transmit when
  // the full r-slot excursion beats idling one slot, charging the gain per
  // slot consumed. Ties transmit.
  sol.action.assign(n, 0);
  const double lambda = sol.avg_cost;
  for (size_t m = 0; m < n; ++m) {
    size_t up = std::min(m + 1, n - 1);
    double stay = idle_cost[m] - lambda + sol.differential[up];
    double go = tx_total[m] - lambda * r + sol.differential[0];
    if (go <= stay) sol.action[m] = 1;
  }
  sol.threshold_offset = -1;
  for (size_t m = 0; m < n; ++m) {
    if (sol.action[m]) {
      sol.threshold_offset = static_cast<long long>(m);
      break;
    }
  }
  if (sol.threshold_offset < 0) {
    sol.never_transmit = true;
    sol.threshold = std::numeric_limits<double>::infinity();
  } else {
    sol.threshold = delta + static_cast<double>(sol.threshold_offset);
  }
  return sol;
}

bool verify_threshold_structure(const MdpSolution& sol) {
  // Monotone actions: once transmit, always transmit (cap state excluded).
  size_t n = sol.action.size();
  if (n < 2) return true;
  bool seen = false;
  for (size_t m = 0; m + 1 < n; ++m) {
    if (sol.action[m]) {
      seen = true;
    } else if (seen) {
      return false;
    }
  }
  return true;
}

}  // namespace aoico
