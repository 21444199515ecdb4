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
#include "sim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "core/cost.hpp"
#include "solver/threshold.hpp"
#include "util/parallel.hpp"

namespace aoico {

std::string Policy::name() const {
  if (!label.empty()) return label;
  switch (kind) {
    case PolicyKind::Whittle: return "whittle";
    case PolicyKind::RoundRobin: return "round-robin";
    case PolicyKind::Randomized: return "randomized";
    case PolicyKind::RandomizedWeighted: return "randomized-weighted";
    case PolicyKind::MaxAge: return "max-age";
    case PolicyKind::FixedThreshold: return "threshold";
  }
  return "unknown";
}

namespace {

// Unbiased-enough bounded draw without std::uniform_int_distribution, whose
// output differs across standard libraries; CSV runs must be reproducible
// byte for byte everywhere.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

double draw_unit(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

struct SimAgent {
  int tau = 0;
  int r = 0;
  double aoi = 0.0;
  std::int64_t phase = 0;        // first processing completion at phase + tau
  std::int64_t buffer_age = -1;  // age of freshest processed update, -1 = none
  double in_flight_age = 0.0;    // buffer age captured at transmission start
  // accumulators over the measurement window
  double cost_sum = 0.0;
  double aoi_sum = 0.0;
  std::int64_t busy = 0;
  std::int64_t deliveries = 0;
  std::int64_t wait_sum = 0;
  std::int64_t wait_count = 0;
  // integer-age cost cache; fractional ages (only before the first delivery
  // when the modeled wait is fractional) are evaluated directly
  std::vector<double> cost_cache;
};

}  // namespace

SimReport run(std::span<const AgentSpec> agents, std::span<const int> taus,
              const Policy& policy, const SimOptions& opts) {
  const size_t n = agents.size();
  if (n == 0) throw DomainError("sim: no agents");
  if (taus.size() != n) throw DomainError("sim: tau assignment size mismatch");
  if (opts.horizon < 1) throw DomainError("sim: horizon must be >= 1");
  if (opts.burn_in < 0.0 || opts.burn_in >= 1.0)
    throw DomainError("sim: burn_in must lie in [0, 1)");
  if (policy.kind == PolicyKind::RandomizedWeighted && policy.weights.size() != n)
    throw DomainError("sim: weight count does not match agent count");
  if (policy.kind == PolicyKind::FixedThreshold && policy.thresholds.size() != n)
    throw DomainError("sim: threshold count does not match agent count");

  std::mt19937_64 rng(opts.seed);

  std::vector<SimAgent> st(n);
  std::vector<WhittleTable> index_tables;
  if (policy.kind == PolicyKind::Whittle) {
    index_tables.reserve(n);
    for (size_t i = 0; i < n; ++i) index_tables.emplace_back(agents[i], taus[i]);
  }
  for (size_t i = 0; i < n; ++i) {
    st[i].tau = taus[i];
    st[i].r = agents[i].tx(taus[i]);
    st[i].aoi = reset_age(agents[i], taus[i]);
    st[i].phase = opts.randomize_phase
                      ? static_cast<std::int64_t>(draw_below(rng, taus[i]))
                      : 0;
  }

  auto cost_of = [&](size_t i, double age) {
    double floored = std::floor(age);
    if (floored == age && age >= 0.0 && age < 65536.0) {
      auto idx = static_cast<size_t>(age);
      auto& cache = st[i].cost_cache;
      if (idx >= cache.size()) cache.resize(idx + 1, -1.0);
      if (cache[idx] < 0.0) cache[idx] = agents[i].cost_at(st[i].tau, age);
      return cache[idx];
    }
    return agents[i].cost_at(st[i].tau, age);
  };

  const std::int64_t horizon = opts.horizon;
  const auto start_measure = static_cast<std::int64_t>(opts.burn_in * horizon);
  const auto window = static_cast<double>(horizon - start_measure);

  int owner = -1;             // agent currently on the channel
  std::int64_t remaining = 0; // busy slots left, including the current one
  int rr_next = 0;
  std::vector<int> ready;
  ready.reserve(n);

  SimReport report;
  report.policy = policy.name();
  report.horizon = horizon;
  report.seed = opts.seed;

  auto trace_event = [&](std::int64_t t, int agent, const char* ev) {
    if (!opts.record_trace) return;
    report.trace.push_back(TraceRow{t, agent, st[agent].aoi,
                                    agent == owner ? remaining : 0, ev});
  };

  for (std::int64_t t = 0; t < horizon; ++t) {
    // Processing completions: agent i finishes a sample taken tau slots ago
    // at every t = phase + k*tau, k >= 1. Older unsent updates are replaced.
    for (size_t i = 0; i < n; ++i) {
      auto tau = static_cast<std::int64_t>(st[i].tau);
      if (t >= st[i].phase + tau && (t - st[i].phase) % tau == 0) {
        st[i].buffer_age = tau;
      } else if (st[i].buffer_age >= 0) {
        ++st[i].buffer_age;
      }
    }

    // Scheduling: fill a free channel from the ready set.
    if (owner < 0) {
      ready.clear();
      for (size_t i = 0; i < n; ++i) {
        if (st[i].buffer_age < 0) continue;
        if (policy.kind == PolicyKind::FixedThreshold &&
            st[i].aoi < policy.thresholds[i])
          continue;
        ready.push_back(static_cast<int>(i));
      }
      int pick = -1;
      if (!ready.empty()) {
        switch (policy.kind) {
          case PolicyKind::Whittle: {
            double best = -std::numeric_limits<double>::infinity();
            for (int i : ready) {
              double w = index_tables[static_cast<size_t>(i)].at_age(st[i].aoi);
              if (w > best) { best = w; pick = i; }
            }
            break;
          }
          case PolicyKind::MaxAge:
          case PolicyKind::FixedThreshold: {
            double best = -std::numeric_limits<double>::infinity();
            for (int i : ready) {
              if (st[i].aoi > best) { best = st[i].aoi; pick = i; }
            }
            break;
          }
          case PolicyKind::RoundRobin: {
            for (size_t k = 0; k < n; ++k) {
              int cand = static_cast<int>((rr_next + static_cast<int>(k)) %
                                          static_cast<int>(n));
              if (std::find(ready.begin(), ready.end(), cand) != ready.end()) {
                pick = cand;
                break;
              }
            }
            rr_next = (pick + 1) % static_cast<int>(n);
            break;
          }
          case PolicyKind::Randomized: {
            pick = ready[static_cast<size_t>(draw_below(rng, ready.size()))];
            break;
          }
          case PolicyKind::RandomizedWeighted: {
            double total = 0.0;
            for (int i : ready) total += policy.weights[static_cast<size_t>(i)];
            if (total <= 0.0) {
              pick = ready[static_cast<size_t>(draw_below(rng, ready.size()))];
            } else {
              double u = draw_unit(rng) * total;
              pick = ready.back();
              for (int i : ready) {
                u -= policy.weights[static_cast<size_t>(i)];
                if (u <= 0.0) { pick = i; break; }
              }
            }
            break;
          }
        }
      }
      if (pick >= 0) {
        SimAgent& a = st[static_cast<size_t>(pick)];
        std::int64_t wait = a.buffer_age - a.tau;
        if (wait < 0 || wait >= a.tau)
          throw Error("sim: sample wait " + std::to_string(wait) +
                      " outside [0, tau-1]; scheduling bookkeeping is broken");
        owner = pick;
        remaining = a.r;
        a.in_flight_age = static_cast<double>(a.buffer_age);
        if (t >= start_measure) {
          a.wait_sum += wait;
          ++a.wait_count;
        }
        trace_event(t, pick, "start");
      }
    }

    // Measure at the current slot.
    if (t >= start_measure) {
      for (size_t i = 0; i < n; ++i) {
        st[i].cost_sum += cost_of(i, st[i].aoi);
        st[i].aoi_sum += st[i].aoi;
      }
      if (owner >= 0) ++st[static_cast<size_t>(owner)].busy;
    }
    if (opts.record_trace && opts.trace_stride > 0 && t % opts.trace_stride == 0) {
      for (size_t i = 0; i < n; ++i)
        report.trace.push_back(TraceRow{t, static_cast<int>(i), st[i].aoi,
                                        static_cast<int>(i) == owner ? remaining : 0,
                                        ""});
    }

    // Advance to t+1: ages grow, deliveries collapse the owner's age.
    int delivered = -1;
    if (owner >= 0 && --remaining == 0) {
      delivered = owner;
      owner = -1;
    }
    for (size_t i = 0; i < n; ++i) {
      if (static_cast<int>(i) == delivered) {
        SimAgent& a = st[i];
        a.aoi = a.in_flight_age + a.r;  // tau + r + wait, by construction
        if (t + 1 > start_measure) ++a.deliveries;
        trace_event(t + 1, delivered, "deliver");
      } else {
        st[i].aoi += 1.0;
      }
    }
  }

  report.agents.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    AgentStats s;
    s.agent = agents[i].id;
    s.tau = st[i].tau;
    s.time_avg_cost = st[i].cost_sum / window;
    s.mean_aoi = st[i].aoi_sum / window;
    s.utilization = static_cast<double>(st[i].busy) / window;
    s.mean_wait = st[i].wait_count > 0
                      ? static_cast<double>(st[i].wait_sum) /
                            static_cast<double>(st[i].wait_count)
                      : 0.0;
    s.deliveries = st[i].deliveries;
    report.agents.push_back(s);
    report.total_cost += s.time_avg_cost;
    report.total_utilization += s.utilization;
    report.mean_aoi += s.mean_aoi;
  }
  report.mean_aoi /= static_cast<double>(n);
  return report;
}

std::vector<ComparisonRow> compare_policies(std::span<const AgentSpec> agents,
                                            const std::vector<ComparisonEntry>& entries,
                                            std::int64_t horizon,
                                            std::span<const std::uint64_t> seeds,
                                            const SimOptions& base) {
  if (seeds.empty()) throw DomainError("compare_policies: no seeds");
  struct Job {
    size_t entry;
    size_t seed_idx;
  };
  std::vector<Job> jobs;
  for (size_t e = 0; e < entries.size(); ++e)
    for (size_t s = 0; s < seeds.size(); ++s) jobs.push_back({e, s});

  std::vector<double> costs(jobs.size());
  auto worker = [&](size_t j) {
    const Job& job = jobs[j];
    SimOptions opts = base;
    opts.horizon = horizon;
    opts.seed = seeds[job.seed_idx];
    opts.record_trace = false;
    SimReport rep = run(agents, entries[job.entry].taus, entries[job.entry].policy, opts);
    costs[j] = rep.total_cost;
  };

  // Shared-nothing grid; fan out across hardware threads, results land in a
  // preallocated slot per job so ordering (and output bytes) never changes.
  parallel_for_index(jobs.size(), worker);

  std::vector<ComparisonRow> rows;
  rows.reserve(entries.size());
  for (size_t e = 0; e < entries.size(); ++e) {
    ComparisonRow row;
    row.policy = entries[e].policy.name();
    row.taus = entries[e].taus;
    row.seeds = static_cast<int>(seeds.size());
    row.per_seed_cost.resize(seeds.size());
    for (size_t s = 0; s < seeds.size(); ++s)
      row.per_seed_cost[s] = costs[e * seeds.size() + s];
    double mean = 0.0;
    for (double c : row.per_seed_cost) mean += c;
    mean /= static_cast<double>(seeds.size());
    double var = 0.0;
    for (double c : row.per_seed_cost) var += (c - mean) * (c - mean);
    var = seeds.size() > 1 ? var / static_cast<double>(seeds.size() - 1) : 0.0;
    row.mean_total_cost = mean;
    row.stderr_mean = std::sqrt(var / static_cast<double>(seeds.size()));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace aoico
