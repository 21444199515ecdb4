#include "doctest.h"

#include <string>

#include "io/scenario.hpp"

using namespace aoico;

namespace {

std::string scenario_path(const char* name) {
  return std::string(AOICO_SCENARIO_DIR) + "/" + name;
}

bool throws_parse_error_mentioning(const std::string& text, const std::string& needle) {
  try {
    parse_scenario(text);
  } catch (const ParseError& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

const char* kMinimal = R"({
  "agents": [
    {"tau_set": [1, 2], "tx_len": "identity", "delta_wait": 0,
     "cost": {"kind": "affine", "q_hat": 3.0, "slope": 0.5}}
  ]
})";

}  // namespace

TEST_CASE("shipped scenario files load") {
  for (const char* name : {"gridmap9.json", "twin_linear.json", "rideshare.json"}) {
    Scenario sc = load_scenario(scenario_path(name));
    CHECK_FALSE(sc.agents.empty());
    for (const AgentSpec& a : sc.agents) CHECK_NOTHROW(a.validate());
  }
  Scenario grid = load_scenario(scenario_path("gridmap9.json"));
  CHECK(grid.name == "gridmap9");
  CHECK(grid.agents.size() == 9);
  CHECK(grid.gridmap.has_value());
  CHECK(grid.simulation.seeds == 20);
  // The shipped map mixes large slow halls with small fast-changing patches.
  REQUIRE(grid.gridmap->region_cells.size() == 9);
  CHECK(grid.gridmap->region_cells.front() == 1600);
  CHECK(grid.gridmap->region_cells.back() == 100);
  const auto* noisy = dynamic_cast<const EntropyGridCost*>(grid.agents.back().cost.get());
  REQUIRE(noisy != nullptr);
  CHECK(noisy->num_cells() == 100);
}

TEST_CASE("gridmap cells field accepts a scalar or a per-region list") {
  Scenario uni = parse_scenario(
      R"({"gridmap": {"regions": 2, "p_min": 0.01, "p_max": 0.1, "cells": 64}})", "uni");
  REQUIRE(uni.agents.size() == 2);
  for (const AgentSpec& a : uni.agents) {
    const auto* c = dynamic_cast<const EntropyGridCost*>(a.cost.get());
    REQUIRE(c != nullptr);
    CHECK(c->num_cells() == 64);
  }

  Scenario mixed = parse_scenario(
      R"({"gridmap": {"regions": 2, "p_min": 0.01, "p_max": 0.1, "cells": [64, 9]}})",
      "mixed");
  REQUIRE(mixed.agents.size() == 2);
  CHECK(dynamic_cast<const EntropyGridCost*>(mixed.agents[0].cost.get())->num_cells() == 64);
  CHECK(dynamic_cast<const EntropyGridCost*>(mixed.agents[1].cost.get())->num_cells() == 9);

  // Length mismatch is refused with the gridmap location in the message.
  CHECK(throws_parse_error_mentioning(
      R"({"gridmap": {"regions": 3, "p_min": 0.01, "p_max": 0.1, "cells": [64, 9]}})",
      "one entry per region"));
}

TEST_CASE("emit-parse round trip is a fixpoint") {
  for (const char* name : {"gridmap9.json", "twin_linear.json", "rideshare.json"}) {
    Scenario sc = load_scenario(scenario_path(name));
    std::string once = emit_scenario(sc);
    Scenario back = parse_scenario(once, sc.name);
    std::string twice = emit_scenario(back);
    CHECK(once == twice);

    // Semantic spot checks across the round trip.
    REQUIRE(back.agents.size() == sc.agents.size());
    for (size_t i = 0; i < sc.agents.size(); ++i) {
      CHECK(back.agents[i].tau_set == sc.agents[i].tau_set);
      CHECK(back.agents[i].tx(sc.agents[i].tau_set.front()) ==
            sc.agents[i].tx(sc.agents[i].tau_set.front()));
      CHECK(back.agents[i].cost->kind() == std::string(sc.agents[i].cost->kind()));
    }
    CHECK(back.simulation.horizon == sc.simulation.horizon);
    CHECK(back.simulation.policies == sc.simulation.policies);
    CHECK(back.output.dir == sc.output.dir);
  }
}

TEST_CASE("minimal inline scenario parses with defaults") {
  Scenario sc = parse_scenario(kMinimal, "inline");
  REQUIRE(sc.agents.size() == 1);
  CHECK(sc.agents[0].tx(2) == 2);
  CHECK(sc.simulation.horizon == 100000);
  CHECK(sc.simulation.seeds == 10);
  CHECK(sc.simulation.policies ==
        std::vector<std::string>{"whittle", "round-robin", "randomized"});
  CHECK_FALSE(sc.gridmap.has_value());
}

TEST_CASE("strict parsing names the offending location") {
  CHECK(throws_parse_error_mentioning(R"({"agents": [], "junk": 1})", "junk"));
  CHECK(throws_parse_error_mentioning(
      R"({"agents": [{"tau_set": [1], "cost": {"kind": "affine"}}]})", "q_hat"));
  CHECK(throws_parse_error_mentioning(
      R"({"agents": [{"cost": {"kind": "affine", "q_hat": 1}}]})", "tau_set"));
  CHECK(throws_parse_error_mentioning(
      R"({"agents": [{"tau_set": [1], "surprise": true,
          "cost": {"kind": "affine", "q_hat": 1}}]})",
      "surprise"));
  CHECK(throws_parse_error_mentioning(
      R"({"agents": [{"tau_set": [1], "cost": {"kind": "mystery"}}]})", "mystery"));
  CHECK(throws_parse_error_mentioning("{", "invalid JSON"));
  CHECK(throws_parse_error_mentioning(R"({"simulation": {"horizon": 1}})", "agents"));

  // Both agent sources at once is ambiguous and refused.
  CHECK(throws_parse_error_mentioning(
      R"({"agents": [{"tau_set": [1], "cost": {"kind": "affine", "q_hat": 1}}],
          "gridmap": {"regions": 2}})",
      "either"));
}

TEST_CASE("policy and tau assignments are validated at parse time") {
  CHECK(throws_parse_error_mentioning(
      R"({"agents": [{"tau_set": [1], "cost": {"kind": "affine", "q_hat": 1}}],
          "simulation": {"policies": ["whittle", "lifo"]}})",
      "lifo"));
  // One tau per agent.
  CHECK(throws_parse_error_mentioning(
      R"({"agents": [{"tau_set": [1], "cost": {"kind": "affine", "q_hat": 1}}],
          "simulation": {"taus": [1, 1]}})",
      "one tau per agent"));
  // The assigned tau must be admissible.
  CHECK(throws_parse_error_mentioning(
      R"({"agents": [{"tau_set": [1, 2], "cost": {"kind": "affine", "q_hat": 1}}],
          "simulation": {"taus": [3]}})",
      "not admissible"));
  // Bad burn-in range.
  CHECK(throws_parse_error_mentioning(
      R"({"agents": [{"tau_set": [1], "cost": {"kind": "affine", "q_hat": 1}}],
          "simulation": {"burn_in": 1.5}})",
      "burn_in"));
}

TEST_CASE("missing scenario file raises a parse error") {
  CHECK_THROWS_AS(load_scenario(scenario_path("does_not_exist.json")), ParseError);
}
