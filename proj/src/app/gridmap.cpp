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
#include "app/gridmap.hpp"

#include <cmath>

namespace aoico {

namespace {

std::vector<int> default_tau_set() {
  std::vector<int> taus;
  for (int tau = 1; tau <= 12; ++tau) taus.push_back(tau);
  return taus;
}

}  // namespace

AgentSpec RegionModel::agent(int id) const {
  if (flip_prob <= 0.0 || flip_prob > 0.5)
    throw DomainError("RegionModel: flip_prob must lie in (0, 0.5]");
  AgentSpec spec;
  spec.id = id;
  spec.tau_set = tau_set.empty() ? default_tau_set() : tau_set;
  spec.tx_len = TxLen::mapping();
  spec.delta_wait = WaitPolicy{};  // mean wait of a uniformly random phase
  spec.cost = std::make_shared<EntropyGridCost>(flip_prob, cells, quality);
  spec.validate();
  return spec;
}

std::vector<double> GridMapConfig::flip_probs() const {
  if (regions < 1) throw DomainError("GridMapConfig: regions must be >= 1");
  if (p_min <= 0.0 || p_max > 0.5 || p_min > p_max)
    throw DomainError("GridMapConfig: need 0 < p_min <= p_max <= 0.5");
  std::vector<double> ps;
  ps.reserve(static_cast<size_t>(regions));
  if (regions == 1) {
    ps.push_back(p_min);
    return ps;
  }
  double ratio = std::log(p_max / p_min);
  for (int i = 0; i < regions; ++i) {
    double frac = static_cast<double>(i) / static_cast<double>(regions - 1);
    ps.push_back(p_min * std::exp(ratio * frac));
  }
  return ps;
}

std::vector<AgentSpec> build_scenario(const GridMapConfig& cfg) {
  std::vector<AgentSpec> agents;
  auto ps = cfg.flip_probs();
  if (!cfg.region_cells.empty() && cfg.region_cells.size() != ps.size())
    throw DomainError("GridMapConfig: region_cells must have one entry per region");
  agents.reserve(ps.size());
  for (size_t i = 0; i < ps.size(); ++i) {
    RegionModel region;
    region.flip_prob = ps[i];
    region.cells = cfg.region_cells.empty() ? cfg.cells : cfg.region_cells[i];
    region.quality = cfg.quality;
    region.tau_set = cfg.tau_set;
    agents.push_back(region.agent(static_cast<int>(i)));
  }
  return agents;
}

std::vector<double> entropy_curve(const RegionModel& region, int tau,
                                  const std::vector<double>& ages) {
  EntropyGridCost cost(region.flip_prob, region.cells, region.quality);
  std::vector<double> out;
  out.reserve(ages.size());
  for (double age : ages) out.push_back(cost.eval(tau, age));
  return out;
}

}  // namespace aoico
