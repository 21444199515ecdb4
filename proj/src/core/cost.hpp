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
#include <vector>

#include "core/types.hpp"

namespace aoico {

// Binary entropy in bits; 0 at x in {0, 1}.
double binary_entropy(double x);

// Per-slot monitoring cost J(tau, age). All models used by the solver must be
// non-decreasing in age for fixed tau and non-increasing in tau for fixed age
// (better processing never hurts, staleness never helps); check_assumption1
// probes that numerically on a grid.
class CostModel {
 public:
  virtual ~CostModel() = default;
  virtual double eval(int tau, double age) const = 0;
  virtual const char* kind() const = 0;
};

// base(tau) + slope * age with base(tau) = (2 + 2 e^{-0.2 tau}) * q_hat.
// The base term is a dispatch-quality penalty that improves with processing
// effort; the slope term charges staleness directly.
class AffineAoiCost final : public CostModel {
 public:
  explicit AffineAoiCost(double q_hat, double slope = 1.0);
  double base(int tau) const;
  double eval(int tau, double age) const override;
  const char* kind() const override { return "affine"; }
  double q_hat() const { return q_hat_; }
  double slope() const { return slope_; }

 private:
  double q_hat_;
  double slope_;
};

// scale * age^exponent * e^{-tau_decay * tau}. Synthetic polynomial-growth
// family used for randomized solver/oracle cross-checks.
class PowerAoiCost final : public CostModel {
 public:
  PowerAoiCost(double scale, double exponent, double tau_decay = 0.0);
  double eval(int tau, double age) const override;
  const char* kind() const override { return "power"; }
  double scale() const { return scale_; }
  double exponent() const { return exponent_; }
  double tau_decay() const { return tau_decay_; }

 private:
  double scale_;
  double exponent_;
  double tau_decay_;
};

// Sensing quality q(tau): probability a processed update classifies a cell
// correctly. Must be non-decreasing in tau and >= 1/2 (better than a coin).
struct QualityMap {
  enum class Rule { ExpSaturation, Table };

  Rule rule = Rule::ExpSaturation;
  std::map<int, double> table;

  double operator()(int tau) const;

  static QualityMap exp_saturation() { return QualityMap{Rule::ExpSaturation, {}}; }
  static QualityMap from_table(std::map<int, double> t) {
    return QualityMap{Rule::Table, std::move(t)};
  }
};

// Expected posterior entropy of a region of independently flipping cells.
// Each cell flips state w.p. p per slot; an update processed for tau slots
// pins a cell correctly w.p. q(tau). After `age` slots of drift the belief
// that a cell is in its reported state has contracted toward 1/2 by the
// factor (1-2p)^age, and the region cost is num_cells times the binary
// entropy of that belief.
class EntropyGridCost final : public CostModel {
 public:
  EntropyGridCost(double flip_prob, int num_cells, QualityMap quality = {});

  // Belief that a cell currently matches the delivered estimate:
  // 1/2 + (q(tau) - 1/2) (1 - 2p)^age.
  double belief_match(int tau, double age) const;
  double eval(int tau, double age) const override;
  const char* kind() const override { return "entropy"; }
  double flip_prob() const { return flip_prob_; }
  int num_cells() const { return num_cells_; }
  const QualityMap& quality() const { return quality_; }

 private:
  double flip_prob_;
  int num_cells_;
  QualityMap quality_;
};

double entropy_of_region(const EntropyGridCost& region, int tau, double age);

// Numerically verify monotonicity in age (non-decreasing) and tau
// (non-increasing) over the given grids. Grids must be sorted ascending.
bool check_assumption1(const CostModel& model, const std::vector<int>& tau_grid,
                       const std::vector<double>& age_grid);

}  // namespace aoico
