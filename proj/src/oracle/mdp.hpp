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
#include <vector>

#include "core/types.hpp"

namespace aoico {

// Brute-force check of the closed-form solver: pose the single-agent problem
// as an average-cost dynamic program on a truncated age lattice and solve it
// by relative value iteration, sharing nothing with the threshold formulas.
//
// States are age offsets m = 0..cap (age = Delta + m, saturating at the cap).
// Idling costs one slot at the current age; transmitting is collapsed into a
// single decision of length r(tau) that pays the channel charge plus the ages
// passed through, then restarts at offset 0.

struct MdpOptions {
  // States above the reset age; <0 picks max(200, 50 * r(tau)).
  long long age_cap_offset = -1;
  double vi_tol = 1e-9;          // value-iteration span, relative to max(1, |gain|)
  long long max_iterations = 20'000'000;
  // Self-loop weight of the aperiodicity transformation. Gain is unchanged;
  // relative values pick up a factor 1/eta that is divided back out. The
  // midpoint maximizes the spectral gap of the induced cyclic chains.
  double eta = 0.5;
};

struct MdpSolution {
  double avg_cost = 0.0;             // optimal gain
  bool never_transmit = false;       // greedy policy idles in every state
  long long threshold_offset = -1;   // first offset whose greedy action transmits
  double threshold = 0.0;            // Delta + offset (infinity if never)
  double reset_age = 0.0;
  int tx_len = 0;
  std::vector<double> differential;  // relative values, anchored to 0 at offset 0
  std::vector<std::uint8_t> action;  // greedy action per offset (1 = transmit)
  long long iterations = 0;
  double span_at_stop = 0.0;
  long long age_cap_offset = 0;
};

MdpSolution solve_mdp(const AgentSpec& spec, int tau, double tx_cost,
                      const MdpOptions& opts = {});

// True when the greedy actions are a threshold rule: idle below some offset,
// transmit from there on. The saturated top state is excluded since the
// truncation distorts it.
bool verify_threshold_structure(const MdpSolution& sol);

}  // namespace aoico
