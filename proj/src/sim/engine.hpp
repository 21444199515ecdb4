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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace aoico {

// Slot-level simulation of N agents sharing one channel. Each agent samples
// and processes continuously (a fresh update finishes every tau_i slots), the
// channel carries one transmission at a time, and a scheduling policy picks
// who transmits whenever the channel frees up. Ages follow the one-slot
// recursion exactly; the engine enforces that on every delivery.

enum class PolicyKind {
  Whittle,            // highest marginal-value index among ready agents
  RoundRobin,         // cyclic scan, skipping agents with nothing to send
  Randomized,         // uniform among ready agents
  RandomizedWeighted, // fixed weights, renormalized over ready agents
  MaxAge,             // greedy on current age
  FixedThreshold,     // transmit only agents at/above their threshold
};

struct Policy {
  PolicyKind kind = PolicyKind::Whittle;
  std::vector<double> weights;     // RandomizedWeighted, one per agent
  std::vector<double> thresholds;  // FixedThreshold, one per agent
  std::string label;               // reporting name; defaults per kind

  std::string name() const;

  static Policy whittle() { return {PolicyKind::Whittle, {}, {}, ""}; }
  static Policy round_robin() { return {PolicyKind::RoundRobin, {}, {}, ""}; }
  static Policy randomized() { return {PolicyKind::Randomized, {}, {}, ""}; }
  static Policy randomized_weighted(std::vector<double> w) {
    return {PolicyKind::RandomizedWeighted, std::move(w), {}, ""};
  }
  static Policy max_age() { return {PolicyKind::MaxAge, {}, {}, ""}; }
  static Policy fixed_threshold(std::vector<double> h) {
    return {PolicyKind::FixedThreshold, {}, std::move(h), ""};
  }
};

struct SimOptions {
  std::int64_t horizon = 100000;
  std::uint64_t seed = 1;
  double burn_in = 0.1;          // fraction of the horizon dropped from stats
  bool randomize_phase = true;   // random per-seed processing phase offsets
  bool record_trace = false;
  std::int64_t trace_stride = 1000;
};

struct AgentStats {
  int agent = 0;
  int tau = 0;
  double time_avg_cost = 0.0;
  double mean_aoi = 0.0;
  double utilization = 0.0;   // share of measured slots this agent held the channel
  double mean_wait = 0.0;     // average sample wait between processing and launch
  std::int64_t deliveries = 0;
};

struct TraceRow {
  std::int64_t t = 0;
  int agent = 0;
  double aoi = 0.0;
  std::int64_t z = 0;  // remaining transmission slots (0 = channel-idle for agent)
  std::string event;   // "start", "deliver", or "" for sampled rows
};

struct SimReport {
  std::string policy;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  std::vector<AgentStats> agents;
  double total_cost = 0.0;         // sum of per-agent time-averaged costs
  double total_utilization = 0.0;  // channel busy share, <= 1 by construction
  double mean_aoi = 0.0;           // across agents
  std::vector<TraceRow> trace;
};

SimReport run(std::span<const AgentSpec> agents, std::span<const int> taus,
              const Policy& policy, const SimOptions& opts);

// One (policy, tau assignment) entry of a comparison grid.
struct ComparisonEntry {
  Policy policy;
  std::vector<int> taus;
};

struct ComparisonRow {
  std::string policy;
  std::vector<int> taus;
  int seeds = 0;
  double mean_total_cost = 0.0;
  double stderr_mean = 0.0;
  std::vector<double> per_seed_cost;  // in seed order, for paired contrasts
};

// Runs every entry over the same seed list (same seeds => same initial
// phases, so contrasts between entries are paired) and reports mean and
// standard error of the total cost.
std::vector<ComparisonRow> compare_policies(std::span<const AgentSpec> agents,
                                            const std::vector<ComparisonEntry>& entries,
                                            std::int64_t horizon,
                                            std::span<const std::uint64_t> seeds,
                                            const SimOptions& base = {});

}  // namespace aoico
