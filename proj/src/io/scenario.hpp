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

#include <optional>
#include <string>
#include <vector>

#include "app/gridmap.hpp"
#include "solver/codesign.hpp"

namespace aoico {

struct SimulationConfig {
  long long horizon = 100000;
  int seeds = 10;
  std::uint64_t seed_base = 1;
  double burn_in = 0.1;
  std::vector<std::string> policies = {"whittle", "round-robin", "randomized"};
  std::vector<int> taus;  // optional fixed assignment; empty = unset
};

struct OutputConfig {
  std::string dir;
  bool trace = false;
};

struct Scenario {
  std::string name = "scenario";  // file stem; not serialized
  std::vector<AgentSpec> agents;
  // When the agents came from a generator config, keep it so emitting the
  // scenario reproduces the compact form.
  std::optional<GridMapConfig> gridmap;
  OptimizerConfig optimizer;
  SimulationConfig simulation;
  OutputConfig output;
};

extern const std::vector<std::string> kKnownPolicies;

// Strict parser: unknown keys, missing required fields and out-of-range values
// all raise ParseError naming the offending location.
Scenario parse_scenario(const std::string& text, const std::string& name = "scenario");
Scenario load_scenario(const std::string& path);
std::string emit_scenario(const Scenario& scenario);

}  // namespace aoico
