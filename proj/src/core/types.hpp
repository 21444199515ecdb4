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

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace aoico {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid inputs or broken preconditions (bad tau, misaligned threshold, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed scenario files.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Iterative procedures that ran out of budget (value iteration, threshold
// search, dual ascent bracket growth).
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class CostModel;

// Transmission length r(tau): channel slots needed to push one update whose
// local processing ran for tau slots. Longer processing means a richer update,
// hence the builtin "mapping" rule grows with tau.
struct TxLen {
  enum class Rule { Mapping, Identity, Table };

  Rule rule = Rule::Mapping;
  std::map<int, int> table;  // only used when rule == Table

  int operator()(int tau) const;

  static TxLen mapping() { return TxLen{Rule::Mapping, {}}; }
  static TxLen identity() { return TxLen{Rule::Identity, {}}; }
  static TxLen from_table(std::map<int, int> t) {
    return TxLen{Rule::Table, std::move(t)};
  }
};

// Queueing wait delta(tau) between a sample finishing local processing and the
// slot its transmission starts. The analytic model uses a deterministic stand-in
// for the random wait; with a uniformly random processing phase the mean wait
// is (tau - 1) / 2, which is the default here.
struct WaitPolicy {
  bool uniform_phase_mean = true;
  double value = 0.0;

  double operator()(int tau) const {
    return uniform_phase_mean ? (tau - 1) / 2.0 : value;
  }
};

struct AgentSpec {
  int id = 0;
  std::vector<int> tau_set;  // admissible processing times, sorted ascending
  TxLen tx_len;
  WaitPolicy delta_wait;
  std::shared_ptr<const CostModel> cost;

  bool has_tau(int tau) const;
  int tx(int tau) const;        // r(tau); DomainError if tau not admissible
  double delta(int tau) const;  // modeled wait for this tau
  double cost_at(int tau, double age) const;

  // Throws DomainError when the spec is internally inconsistent.
  void validate() const;
};

// Age immediately after a delivery: tau + r(tau) + delta(tau).
double reset_age(const AgentSpec& spec, int tau);

// One-slot age recursion. On delivery the age collapses to
// tau + r(tau) + actual_wait, otherwise it grows by one slot.
double step_aoi(double age, bool delivered, const AgentSpec& spec, int tau,
                long long actual_wait = 0);

}  // namespace aoico
