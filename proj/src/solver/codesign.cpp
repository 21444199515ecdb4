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
#include "solver/codesign.hpp"

#include <algorithm>
#include <cmath>

namespace aoico {

std::vector<TauChoice> decoupled_choices(std::span<const AgentSpec> agents,
                                         double tx_cost,
                                         const ThresholdSearchLimits& limits) {
  std::vector<TauChoice> out;
  out.reserve(agents.size());
  for (const AgentSpec& a : agents) out.push_back(best_tau(a, tx_cost, limits));
  return out;
}

double total_utilization(const std::vector<TauChoice>& choices) {
  double f = 0.0;
  for (const TauChoice& c : choices) f += c.result.utilization;
  return f;
}

double dual_value(std::span<const AgentSpec> agents, double tx_cost,
                  const ThresholdSearchLimits& limits) {
  double d = -tx_cost;
  for (const AgentSpec& a : agents) d += best_tau(a, tx_cost, limits).result.avg_cost;
  return d;
}

namespace {

struct Probe {
  double tx_cost;
  std::vector<TauChoice> choices;
  double util;
  double dual;
};

class Pricer {
 public:
  Pricer(std::span<const AgentSpec> agents, const OptimizerConfig& cfg,
         std::vector<IterationRecord>* trace)
      : agents_(agents), cfg_(cfg), trace_(trace) {}

  Probe eval(double c) {
    Probe p;
    p.tx_cost = c;
    p.choices = decoupled_choices(agents_, c, cfg_.search);
    p.util = total_utilization(p.choices);
    p.dual = -c;
    for (const TauChoice& ch : p.choices) p.dual += ch.result.avg_cost;
    ++count_;
    trace_->push_back({count_, c, p.util, p.dual});
    return p;
  }

  int count() const { return count_; }

 private:
  std::span<const AgentSpec> agents_;
  const OptimizerConfig& cfg_;
  std::vector<IterationRecord>* trace_;
  int count_ = 0;
};

void finish(CodesignResult& res, Probe&& p, int iters, bool converged) {
  res.c_star = p.tx_cost;
  res.choices = std::move(p.choices);
  res.total_utilization = p.util;
  res.dual_value = p.dual;
  res.iterations = iters;
  res.converged = converged;
  res.utilization_gap = 1.0 - p.util;
  res.all_never_transmit = true;
  for (const TauChoice& c : res.choices)
    if (!c.result.never_transmit) res.all_never_transmit = false;
}

}  // namespace

CodesignResult optimize(std::span<const AgentSpec> agents, const OptimizerConfig& cfg) {
  if (agents.empty()) throw DomainError("optimize: no agents");
  if (cfg.step <= 0.0) throw DomainError("optimize: step must be > 0");
  if (cfg.max_iterations < 1) throw DomainError("optimize: max_iterations must be >= 1");

  CodesignResult res;
  Pricer pricer(agents, cfg, &res.trace);

  // A free channel that already fits needs no pricing at all.
  Probe base = pricer.eval(0.0);
  if (base.util <= 1.0) {
    finish(res, std::move(base), pricer.count(), true);
    return res;
  }

  auto accept = [&](Probe&& p, bool resolved) {
    bool conv = resolved || std::fabs(p.util - 1.0) <= cfg.util_tol;
    finish(res, std::move(p), pricer.count(), conv);
  };

  auto bisect = [&](double lo, Probe hi) {
    // Invariant: f(lo) > 1, f(hi.tx_cost) <= 1. The response is piecewise
    // constant, so shrink the bracket to c_tol and take the feasible end.
    while (pricer.count() < cfg.max_iterations &&
           hi.tx_cost - lo > cfg.c_tol * std::max(1.0, hi.tx_cost)) {
      double mid = 0.5 * (lo + hi.tx_cost);
      Probe pm = pricer.eval(mid);
      if (std::fabs(pm.util - 1.0) <= cfg.util_tol) {
        accept(std::move(pm), true);
        return;
      }
      if (pm.util <= 1.0) {
        hi = std::move(pm);
      } else {
        lo = mid;
      }
    }
    accept(std::move(hi), true);
  };

  if (cfg.mode == OptMode::DualAscent) {
    Probe p = cfg.c_init > 0.0 ? pricer.eval(cfg.c_init) : std::move(base);
    for (;;) {
      if (std::fabs(p.util - 1.0) <= cfg.util_tol) {
        accept(std::move(p), false);
        return res;
      }
      if (pricer.count() >= cfg.max_iterations) {
        finish(res, std::move(p), pricer.count(), false);
        return res;
      }
      double c = std::max(0.0, p.tx_cost + cfg.step * (p.util - 1.0));
      p = pricer.eval(c);
    }
  }

  if (cfg.mode == OptMode::Bisection) {
    // Grow the charge geometrically until the response fits, then bisect.
    double lo = 0.0;
    double hi = std::max(cfg.c_init, 1.0);
    for (;;) {
      if (pricer.count() >= cfg.max_iterations) {
        finish(res, pricer.eval(hi), pricer.count(), false);
        return res;
      }
      Probe p = pricer.eval(hi);
      if (p.util <= 1.0) {
        bisect(lo, std::move(p));
        return res;
      }
      lo = hi;
      hi *= 4.0;
      if (hi > 1e18)
        throw ConvergenceError("optimize: channel charge exceeded 1e18 without "
                               "bringing utilization under 1");
    }
  }

  // Hybrid: dual ascent supplies a bracket, bisection sharpens it. The gain
  // doubles while the charge keeps landing on the infeasible side, so a far
  // critical price is reached in O(log C*) probes instead of a fixed-step
  // crawl; the first overshoot hands a tight bracket to the bisection.
  Probe p = cfg.c_init > 0.0 ? pricer.eval(cfg.c_init) : std::move(base);
  double lo = 0.0;
  double gain = cfg.step;
  for (;;) {
    if (std::fabs(p.util - 1.0) <= cfg.util_tol) {
      accept(std::move(p), false);
      return res;
    }
    if (p.util < 1.0) {
      bisect(lo, std::move(p));
      return res;
    }
    if (pricer.count() >= cfg.max_iterations) {
      finish(res, std::move(p), pricer.count(), false);
      return res;
    }
    lo = p.tx_cost;
    double c = p.tx_cost + gain * (p.util - 1.0);
    gain = std::min(gain * 2.0, 1e15);
    if (c > 1e18)
      throw ConvergenceError("optimize: channel charge exceeded 1e18 without "
                             "bringing utilization under 1");
    p = pricer.eval(c);
  }
}

}  // namespace aoico
