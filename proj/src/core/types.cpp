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
#include "core/types.hpp"

#include <algorithm>

#include "core/cost.hpp"

namespace aoico {

int TxLen::operator()(int tau) const {
  if (tau < 1) throw DomainError("tx_len: tau must be >= 1, got " + std::to_string(tau));
  switch (rule) {
    case Rule::Mapping:
      return 5 + (tau + 1) / 2;  // 5 + ceil(tau/2)
    case Rule::Identity:
      return tau;
    case Rule::Table: {
      auto it = table.find(tau);
      if (it == table.end())
        throw DomainError("tx_len table has no entry for tau=" + std::to_string(tau));
      return it->second;
    }
  }
  throw DomainError("tx_len: bad rule");
}

bool AgentSpec::has_tau(int tau) const {
  return std::binary_search(tau_set.begin(), tau_set.end(), tau);
}

int AgentSpec::tx(int tau) const {
  if (!has_tau(tau))
    throw DomainError("agent " + std::to_string(id) + ": tau=" + std::to_string(tau) +
                      " not in tau_set");
  return tx_len(tau);
}

double AgentSpec::delta(int tau) const {
  if (!has_tau(tau))
    throw DomainError("agent " + std::to_string(id) + ": tau=" + std::to_string(tau) +
                      " not in tau_set");
  return delta_wait(tau);
}

double AgentSpec::cost_at(int tau, double age) const {
  return cost->eval(tau, age);
}

void AgentSpec::validate() const {
  if (tau_set.empty()) throw DomainError("agent " + std::to_string(id) + ": empty tau_set");
  for (size_t i = 0; i < tau_set.size(); ++i) {
    if (tau_set[i] < 1)
      throw DomainError("agent " + std::to_string(id) + ": tau_set entries must be >= 1");
    if (i > 0 && tau_set[i] <= tau_set[i - 1])
      throw DomainError("agent " + std::to_string(id) +
                        ": tau_set must be strictly increasing");
  }
  if (!cost) throw DomainError("agent " + std::to_string(id) + ": no cost model");

  // r(tau) must be defined, positive and monotone across the tau set. Either
  // direction is fine; what breaks the solver is r jumping around arbitrarily.
  bool non_decr = true, non_incr = true;
  int prev = 0;
  for (size_t i = 0; i < tau_set.size(); ++i) {
    int r = tx_len(tau_set[i]);
    if (r < 1)
      throw DomainError("agent " + std::to_string(id) + ": tx_len(" +
                        std::to_string(tau_set[i]) + ") must be >= 1");
    if (i > 0) {
      if (r < prev) non_decr = false;
      if (r > prev) non_incr = false;
    }
    prev = r;
  }
  if (!non_decr && !non_incr)
    throw DomainError("agent " + std::to_string(id) + ": tx_len not monotone over tau_set");

  int tau_max = tau_set.back();
  for (int tau : tau_set) {
    double d = delta_wait(tau);
    if (d < 0.0 || d > static_cast<double>(tau_max - 1) + 1e-12)
      throw DomainError("agent " + std::to_string(id) + ": delta_wait(" +
                        std::to_string(tau) + ") outside [0, max_tau - 1]");
  }
}

double reset_age(const AgentSpec& spec, int tau) {
  return static_cast<double>(tau) + spec.tx(tau) + spec.delta(tau);
}

double step_aoi(double age, bool delivered, const AgentSpec& spec, int tau,
                long long actual_wait) {
  if (!delivered) return age + 1.0;
  if (actual_wait < 0 || actual_wait > tau - 1)
    throw DomainError("step_aoi: wait " + std::to_string(actual_wait) +
                      " outside [0, tau-1] for tau=" + std::to_string(tau));
  return static_cast<double>(tau) + spec.tx(tau) + static_cast<double>(actual_wait);
}

}  // namespace aoico
