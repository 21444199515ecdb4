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
#include "solver/threshold.hpp"

#include <cmath>
#include <limits>

#include "core/cost.hpp"

namespace aoico {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Snap a lattice-valued age offset to its integer index, rejecting values
// that are not on the lattice.
long long align_offset(double offset, const char* what) {
  double rounded = std::round(offset);
  if (std::fabs(offset - rounded) > 1e-9)
    throw DomainError(std::string(what) + ": age " + std::to_string(offset) +
                      " above the lattice base is not an integer offset");
  return static_cast<long long>(rounded);
}

}  // namespace

double threshold_cost(const AgentSpec& spec, int tau, double threshold, double tx_cost) {
  if (tx_cost < 0.0) throw DomainError("threshold_cost: negative tx_cost");
  int r = spec.tx(tau);
  double delta = reset_age(spec, tau);
  long long m = align_offset(threshold - delta, "threshold_cost");
  if (m < 0) throw DomainError("threshold_cost: threshold below reset age");

  // Cycle: ages Delta .. H+r-1 (one per slot), r of them spent transmitting.
  long long len = m + r;
  double sum = 0.0;
  for (long long k = 0; k < len; ++k) sum += spec.cost_at(tau, delta + static_cast<double>(k));
  return (sum + tx_cost * r) / static_cast<double>(len);
}

double v_function(const AgentSpec& spec, int tau, double age) {
  int r = spec.tx(tau);
  double delta = reset_age(spec, tau);
  // Lowest meaningful argument is Delta - r + 1, where the value is zero.
  long long n = align_offset(age + r - delta, "v_function");  // = (age + r) - Delta
  if (n < 1)
    throw DomainError("v_function: age below lattice floor Delta - r + 1");
  double sum = 0.0;
  double last = 0.0;
  for (long long k = 0; k < n; ++k) {
    last = spec.cost_at(tau, delta + static_cast<double>(k));
    sum += last;
  }
  return static_cast<double>(n) * last - sum;
}

double whittle_index(const AgentSpec& spec, int tau, double threshold) {
  int r = spec.tx(tau);
  double delta = reset_age(spec, tau);
  long long m = align_offset(threshold - delta, "whittle_index");
  if (m < 0) throw DomainError("whittle_index: threshold below reset age");
  // v_function at H + 1, expanded so a single pass over the cycle suffices.
  long long len = m + r;  // lattice points strictly below the top
  double sum = 0.0;
  for (long long k = 0; k < len; ++k) sum += spec.cost_at(tau, delta + static_cast<double>(k));
  double top = spec.cost_at(tau, delta + static_cast<double>(len));
  return (static_cast<double>(len) * top - sum) / r;
}

ThresholdResult optimal_threshold(const AgentSpec& spec, int tau, double tx_cost,
                                  const ThresholdSearchLimits& limits) {
  if (tx_cost < 0.0) throw DomainError("optimal_threshold: negative tx_cost");
  int r = spec.tx(tau);
  double delta = reset_age(spec, tau);
  double target = tx_cost * r;

  ThresholdResult res;
  res.reset_age = delta;

  // March up the lattice keeping the running cost sum; at step n the marginal
  // value of idling one slot longer is n * J(Delta+n-1) - sum. The first
  // offset m = n - r - 1 where that reaches target is the threshold.
  double sum = 0.0;
  double prev_cost = -kInf;
  long long flat_run = 0;
  long long n_cap = limits.max_offset + r + 1;
  for (long long n = 1; n <= n_cap; ++n) {
    double c = spec.cost_at(tau, delta + static_cast<double>(n - 1));
    if (c < prev_cost - 1e-9 * std::max(1.0, std::fabs(prev_cost)))
      throw DomainError("optimal_threshold: cost decreasing in age (model violates "
                        "the monotonicity assumption)");
    sum += c;
    double v = static_cast<double>(n) * c - sum;
    if (n >= r + 1 && v >= target) {
      long long m = n - r - 1;
      res.offset = m;
      res.threshold = delta + static_cast<double>(m);
      res.extended_threshold = res.threshold + r;
      // Cycle sum excludes the top lattice point reached here.
      res.avg_cost = (sum - c + target) / static_cast<double>(n - 1);
      res.utilization = static_cast<double>(r) / static_cast<double>(m + r);
      return res;
    }
    if (prev_cost > -kInf && std::fabs(c - prev_cost) <= limits.plateau_tol) {
      if (++flat_run >= limits.plateau_steps) {
        // Bounded cost curve that the transmission charge outprices: idle
        // forever and pay the plateau cost every slot.
        res.never_transmit = true;
        res.threshold = kInf;
        res.extended_threshold = kInf;
        res.offset = -1;
        res.avg_cost = c;
        res.utilization = 0.0;
        return res;
      }
    } else {
      flat_run = 0;
    }
    prev_cost = c;
  }
  throw ConvergenceError("optimal_threshold: no threshold within " +
                         std::to_string(limits.max_offset) +
                         " lattice steps and the cost curve has not flattened");
}

double utilization(const ThresholdResult& result) { return result.utilization; }

TauChoice best_tau(const AgentSpec& spec, double tx_cost,
                   const ThresholdSearchLimits& limits) {
  if (spec.tau_set.empty()) throw DomainError("best_tau: empty tau_set");
  TauChoice choice;
  choice.cost_curve.reserve(spec.tau_set.size());
  bool first = true;
  bool any_transmit = false;
  for (int tau : spec.tau_set) {
    ThresholdResult r = optimal_threshold(spec, tau, tx_cost, limits);
    choice.cost_curve.emplace_back(tau, r.avg_cost);
    if (!r.never_transmit) any_transmit = true;
    // Strict improvement only, so cost ties keep the smaller tau.
    if (first || r.avg_cost < choice.result.avg_cost) {
      choice.tau_star = tau;
      choice.result = r;
      first = false;
    }
  }
  choice.all_never_transmit = !any_transmit;
  return choice;
}

WhittleTable::WhittleTable(const AgentSpec& spec, int tau)
    : spec_(&spec), tau_(tau), r_(spec.tx(tau)), delta_(reset_age(spec, tau)) {}

void WhittleTable::extend(long long m) {
  // index_[m] needs lattice costs up to offset m + r.
  while (static_cast<long long>(index_.size()) <= m) {
    long long mi = static_cast<long long>(index_.size());
    while (static_cast<long long>(lattice_cost_.size()) <= mi + r_) {
      double age = delta_ + static_cast<double>(lattice_cost_.size());
      double c = spec_->cost_at(tau_, age);
      if (!lattice_cost_.empty() &&
          c < lattice_cost_.back() - 1e-9 * std::max(1.0, std::fabs(lattice_cost_.back())))
        throw DomainError("WhittleTable: cost decreasing in age");
      // sum_ accumulates everything strictly below the current top point.
      if (static_cast<long long>(lattice_cost_.size()) < mi + r_) sum_ += c;
      lattice_cost_.push_back(c);
    }
    // sum_ currently holds lattice costs for offsets < mi + r. The index at
    // threshold Delta + mi is ((mi+r) J(Delta+mi+r) - sum of the mi+r below) / r.
    double top = lattice_cost_[static_cast<size_t>(mi + r_)];
    double w = (static_cast<double>(mi + r_) * top - sum_) / r_;
    index_.push_back(w);
    // Fold the point at offset mi + r into sum_ for the next row.
    sum_ += top;
  }
}

double WhittleTable::at_offset(long long m) {
  if (m < 0) throw DomainError("WhittleTable: negative offset");
  if (m >= static_cast<long long>(index_.size())) extend(m);
  return index_[static_cast<size_t>(m)];
}

double WhittleTable::at_age(double age) {
  double off = std::floor(age - delta_);
  long long m = off < 0.0 ? 0 : static_cast<long long>(off);
  return at_offset(m);
}

}  // namespace aoico
