#include "doctest.h"

#include <cmath>

#include "app/gridmap.hpp"
#include "helpers.hpp"

using namespace aoico;

TEST_CASE("flip probabilities are log-spaced across the configured range") {
  GridMapConfig cfg;
  cfg.regions = 9;
  cfg.p_min = 5e-4;
  cfg.p_max = 0.1;
  std::vector<double> ps = cfg.flip_probs();
  REQUIRE(ps.size() == 9);
  CHECK(ps.front() == doctest::Approx(5e-4).epsilon(1e-12));
  CHECK(ps.back() == doctest::Approx(0.1).epsilon(1e-12));
  double ratio = ps[1] / ps[0];
  for (size_t i = 1; i + 1 < ps.size(); ++i) {
    CHECK(ps[i + 1] / ps[i] == doctest::Approx(ratio).epsilon(1e-9));
  }

  GridMapConfig single;
  single.regions = 1;
  CHECK(single.flip_probs().size() == 1);
  CHECK(single.flip_probs()[0] == doctest::Approx(single.p_min));
}

TEST_CASE("scenario builder wires one agent per region") {
  GridMapConfig cfg;
  cfg.regions = 4;
  cfg.cells = 400;
  std::vector<AgentSpec> agents = build_scenario(cfg);
  REQUIRE(agents.size() == 4);
  for (size_t i = 0; i < agents.size(); ++i) {
    CHECK(agents[i].id == static_cast<int>(i));
    CHECK(agents[i].tau_set.size() == 12);  // default 1..12
    CHECK(agents[i].tx(4) == 7);            // 5 + ceil(4/2)
    CHECK_NOTHROW(agents[i].validate());
    const auto* cost = dynamic_cast<const EntropyGridCost*>(agents[i].cost.get());
    REQUIRE(cost != nullptr);
    CHECK(cost->num_cells() == 400);
  }
  // Noisier regions must carry higher flip probabilities, in order.
  const auto* first = dynamic_cast<const EntropyGridCost*>(agents.front().cost.get());
  const auto* last = dynamic_cast<const EntropyGridCost*>(agents.back().cost.get());
  CHECK(first->flip_prob() < last->flip_prob());
}

TEST_CASE("per-region cell counts override the uniform size") {
  GridMapConfig cfg;
  cfg.regions = 3;
  cfg.cells = 999;  // ignored once the override is set
  cfg.region_cells = {1600, 400, 25};
  std::vector<AgentSpec> agents = build_scenario(cfg);
  REQUIRE(agents.size() == 3);
  for (size_t i = 0; i < agents.size(); ++i) {
    const auto* cost = dynamic_cast<const EntropyGridCost*>(agents[i].cost.get());
    REQUIRE(cost != nullptr);
    CHECK(cost->num_cells() == cfg.region_cells[i]);
  }

  cfg.region_cells = {1600, 400};  // wrong length
  CHECK_THROWS_AS(build_scenario(cfg), DomainError);
}

TEST_CASE("region entropy curve is monotone and saturates at one bit per cell") {
  RegionModel region;
  region.flip_prob = 0.01;
  region.cells = 1600;
  region.quality = QualityMap::exp_saturation();
  region.tau_set = {1, 2, 3, 4};

  std::vector<double> ages;
  for (int k = 0; k <= 2000; k += 10) ages.push_back(k);
  std::vector<double> curve = entropy_curve(region, 2, ages);
  REQUIRE(curve.size() == ages.size());
  for (size_t i = 1; i < curve.size(); ++i) CHECK(curve[i] >= curve[i - 1] - 1e-9);
  CHECK(curve.back() == doctest::Approx(1600.0).epsilon(1e-6));

  // Better processing lowers the curve pointwise.
  std::vector<double> better = entropy_curve(region, 4, ages);
  for (size_t i = 0; i < curve.size(); ++i) CHECK(better[i] <= curve[i] + 1e-9);
}

TEST_CASE("degenerate regions stay well defined") {
  // A frozen region (p = 0) never decays: flat curve at the initial entropy.
  RegionModel frozen;
  frozen.flip_prob = 0.0;
  frozen.cells = 100;
  frozen.quality = QualityMap::from_table({{1, 0.75}});
  frozen.tau_set = {1};
  std::vector<double> curve = entropy_curve(frozen, 1, {0.0, 10.0, 10000.0});
  CHECK(curve[0] == doctest::Approx(100.0 * binary_entropy(0.75)));
  CHECK(curve[0] == doctest::Approx(curve[2]));

  // Coin-quality updates are worthless: a full bit per cell at every age.
  RegionModel coin;
  coin.flip_prob = 0.1;
  coin.cells = 100;
  coin.quality = QualityMap::from_table({{1, 0.5}});
  coin.tau_set = {1};
  std::vector<double> flat = entropy_curve(coin, 1, {0.0, 3.0, 500.0});
  for (double v : flat) CHECK(v == doctest::Approx(100.0));
}

TEST_CASE("region agents reject out-of-range flip probabilities") {
  RegionModel bad;
  bad.flip_prob = 0.0;  // solver-facing agents need p > 0
  bad.tau_set = {1};
  CHECK_THROWS_AS(bad.agent(0), DomainError);
  bad.flip_prob = 0.7;
  CHECK_THROWS_AS(bad.agent(0), DomainError);
}
