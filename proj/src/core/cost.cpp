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
#include "core/cost.hpp"

#include <cmath>

namespace aoico {

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw DomainError("binary_entropy: argument outside [0,1]");
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

AffineAoiCost::AffineAoiCost(double q_hat, double slope) : q_hat_(q_hat), slope_(slope) {
  if (q_hat < 0.0) throw DomainError("AffineAoiCost: q_hat must be >= 0");
  if (slope <= 0.0) throw DomainError("AffineAoiCost: slope must be > 0");
}

double AffineAoiCost::base(int tau) const {
  return (2.0 + 2.0 * std::exp(-0.2 * tau)) * q_hat_;
}

double AffineAoiCost::eval(int tau, double age) const {
  return base(tau) + slope_ * age;
}

PowerAoiCost::PowerAoiCost(double scale, double exponent, double tau_decay)
    : scale_(scale), exponent_(exponent), tau_decay_(tau_decay) {
  if (scale <= 0.0) throw DomainError("PowerAoiCost: scale must be > 0");
  if (exponent <= 0.0) throw DomainError("PowerAoiCost: exponent must be > 0");
  if (tau_decay < 0.0) throw DomainError("PowerAoiCost: tau_decay must be >= 0");
}

double PowerAoiCost::eval(int tau, double age) const {
  if (age < 0.0) throw DomainError("PowerAoiCost: negative age");
  return scale_ * std::pow(age, exponent_) * std::exp(-tau_decay_ * tau);
}

double QualityMap::operator()(int tau) const {
  if (tau < 1) throw DomainError("quality map: tau must be >= 1");
  switch (rule) {
    case Rule::ExpSaturation:
      return 1.0 - 0.5 * std::exp(-0.5 * tau);
    case Rule::Table: {
      auto it = table.find(tau);
      if (it == table.end())
        throw DomainError("quality table has no entry for tau=" + std::to_string(tau));
      return it->second;
    }
  }
  throw DomainError("quality map: bad rule");
}

EntropyGridCost::EntropyGridCost(double flip_prob, int num_cells, QualityMap quality)
    : flip_prob_(flip_prob), num_cells_(num_cells), quality_(std::move(quality)) {
  if (flip_prob < 0.0 || flip_prob > 0.5)
    throw DomainError("EntropyGridCost: flip_prob must lie in [0, 0.5]");
  if (num_cells < 1) throw DomainError("EntropyGridCost: num_cells must be >= 1");
  for (const auto& [tau, q] : quality_.table) {
    if (q < 0.5 || q > 1.0)
      throw DomainError("EntropyGridCost: quality(" + std::to_string(tau) +
                        ") outside [0.5, 1]");
  }
}

double EntropyGridCost::belief_match(int tau, double age) const {
  if (age < 0.0) throw DomainError("EntropyGridCost: negative age");
  double q = quality_(tau);
  if (q < 0.5 || q > 1.0)
    throw DomainError("EntropyGridCost: quality(" + std::to_string(tau) +
                      ") outside [0.5, 1]");
  // (1-2p)^age; flip chain eigenvalue raised to the drift time. Fractional
  // ages appear before the first delivery, pow handles them directly.
  double contraction = std::pow(1.0 - 2.0 * flip_prob_, age);
  return 0.5 + (q - 0.5) * contraction;
}

double EntropyGridCost::eval(int tau, double age) const {
  return num_cells_ * binary_entropy(belief_match(tau, age));
}

double entropy_of_region(const EntropyGridCost& region, int tau, double age) {
  return region.eval(tau, age);
}

bool check_assumption1(const CostModel& model, const std::vector<int>& tau_grid,
                       const std::vector<double>& age_grid) {
  if (tau_grid.empty() || age_grid.empty())
    throw DomainError("check_assumption1: empty grid");
  // Tolerance scaled to the largest magnitude seen, to forgive float noise in
  // otherwise flat stretches.
  double scale = 1.0;
  for (int tau : tau_grid)
    for (double age : age_grid) scale = std::max(scale, std::fabs(model.eval(tau, age)));
  double tol = 1e-12 * scale;

  for (int tau : tau_grid) {
    double prev = model.eval(tau, age_grid.front());
    for (size_t i = 1; i < age_grid.size(); ++i) {
      double cur = model.eval(tau, age_grid[i]);
      if (cur < prev - tol) return false;
      prev = cur;
    }
  }
  for (double age : age_grid) {
    double prev = model.eval(tau_grid.front(), age);
    for (size_t i = 1; i < tau_grid.size(); ++i) {
      double cur = model.eval(tau_grid[i], age);
      if (cur > prev + tol) return false;
      prev = cur;
    }
  }
  return true;
}

}  // namespace aoico
