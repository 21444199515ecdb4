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

#include <vector>

#include "core/cost.hpp"

namespace aoico {

// Multi-robot occupancy mapping: each agent monitors one region of flipping
// cells. Longer on-board processing yields a more reliable grid estimate but
// a larger compressed update, so transmissions take longer.

struct RegionModel {
  double flip_prob = 0.01;
  int cells = 1600;  // 40 x 40 patch
  QualityMap quality;
  std::vector<int> tau_set;

  AgentSpec agent(int id) const;
};

struct GridMapConfig {
  int regions = 9;
  double p_min = 5e-4;
  double p_max = 0.1;
  int cells = 1600;
  // Regions need not be the same size: a small doorway patch flips fast while
  // a large hall barely changes. When non-empty this overrides `cells` per
  // region and must have one entry per region.
  std::vector<int> region_cells;
  std::vector<int> tau_set;  // empty picks 1..12
  QualityMap quality;

  std::vector<double> flip_probs() const;  // log-spaced p_min..p_max
};

// One agent per region, flip probabilities log-spaced across the config range.
std::vector<AgentSpec> build_scenario(const GridMapConfig& cfg);

// Region entropy as the delivered estimate ages; the staleness cost curve the
// solver sees for this tau.
std::vector<double> entropy_curve(const RegionModel& region, int tau,
                                  const std::vector<double>& ages);

}  // namespace aoico
