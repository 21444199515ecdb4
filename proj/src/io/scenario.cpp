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
#include "io/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace aoico {

using nlohmann::json;

const std::vector<std::string> kKnownPolicies = {
    "whittle", "round-robin", "randomized", "randomized-optimized", "max-age"};

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

void expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) { ok = true; break; }
    if (!ok) fail(where, "unknown key \"" + it.key() + "\"");
  }
}

const json* find(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

long long get_integer(const json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) {
    double v = j.get<double>();
    if (v == static_cast<long long>(v)) return static_cast<long long>(v);
  }
  fail(where, "expected an integer");
}

bool get_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) fail(where, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

std::vector<int> get_int_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of integers");
  std::vector<int> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(static_cast<int>(get_integer(j[i], where + "[" + std::to_string(i) + "]")));
  return out;
}

// Tables with integer keys arrive as JSON objects keyed by the decimal string.
template <typename V, typename Get>
std::map<int, V> get_int_keyed_table(const json& j, const std::string& where, Get get) {
  expect_object(j, where);
  std::map<int, V> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    int key;
    try {
      size_t pos = 0;
      key = std::stoi(it.key(), &pos);
      if (pos != it.key().size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      fail(where, "table key \"" + it.key() + "\" is not an integer");
    }
    out[key] = get(it.value(), where + "[\"" + it.key() + "\"]");
  }
  if (out.empty()) fail(where, "empty table");
  return out;
}

TxLen parse_tx_len(const json& j, const std::string& where) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "mapping") return TxLen::mapping();
    if (s == "identity") return TxLen::identity();
    fail(where, "unknown tx_len rule \"" + s + "\" (want \"mapping\", \"identity\" or a table)");
  }
  if (j.is_object()) {
    auto table = get_int_keyed_table<int>(j, where, [](const json& v, const std::string& w) {
      return static_cast<int>(get_integer(v, w));
    });
    return TxLen::from_table(std::move(table));
  }
  fail(where, "expected \"mapping\", \"identity\" or a {tau: slots} table");
}

WaitPolicy parse_delta_wait(const json& j, const std::string& where) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "uniform-phase-mean") return WaitPolicy{true, 0.0};
    fail(where, "unknown delta_wait rule \"" + s + "\" (want \"uniform-phase-mean\" or a number)");
  }
  if (j.is_number()) {
    double v = j.get<double>();
    if (v < 0.0) fail(where, "delta_wait must be >= 0");
    return WaitPolicy{false, v};
  }
  fail(where, "expected \"uniform-phase-mean\" or a number");
}

QualityMap parse_quality(const json& j, const std::string& where) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "exp-saturation") return QualityMap::exp_saturation();
    fail(where, "unknown quality rule \"" + s + "\" (want \"exp-saturation\" or a table)");
  }
  if (j.is_object()) {
    auto table = get_int_keyed_table<double>(j, where, get_number);
    return QualityMap::from_table(std::move(table));
  }
  fail(where, "expected \"exp-saturation\" or a {tau: q} table");
}

std::shared_ptr<const CostModel> parse_cost(const json& j, const std::string& where) {
  expect_object(j, where);
  const json* kind = find(j, "kind");
  if (!kind) fail(where, "missing field \"kind\"");
  std::string k = get_string(*kind, where + ".kind");
  if (k == "affine") {
    check_keys(j, where, {"kind", "q_hat", "slope"});
    const json* q = find(j, "q_hat");
    if (!q) fail(where, "missing field \"q_hat\"");
    double slope = 1.0;
    if (const json* s = find(j, "slope")) slope = get_number(*s, where + ".slope");
    return std::make_shared<AffineAoiCost>(get_number(*q, where + ".q_hat"), slope);
  }
  if (k == "power") {
    check_keys(j, where, {"kind", "scale", "exponent", "tau_decay"});
    const json* sc = find(j, "scale");
    const json* ex = find(j, "exponent");
    if (!sc) fail(where, "missing field \"scale\"");
    if (!ex) fail(where, "missing field \"exponent\"");
    double decay = 0.0;
    if (const json* d = find(j, "tau_decay")) decay = get_number(*d, where + ".tau_decay");
    return std::make_shared<PowerAoiCost>(get_number(*sc, where + ".scale"),
                                          get_number(*ex, where + ".exponent"), decay);
  }
  if (k == "entropy") {
    check_keys(j, where, {"kind", "flip_prob", "cells", "quality"});
    const json* p = find(j, "flip_prob");
    const json* c = find(j, "cells");
    if (!p) fail(where, "missing field \"flip_prob\"");
    if (!c) fail(where, "missing field \"cells\"");
    QualityMap quality;
    if (const json* q = find(j, "quality")) quality = parse_quality(*q, where + ".quality");
    return std::make_shared<EntropyGridCost>(
        get_number(*p, where + ".flip_prob"),
        static_cast<int>(get_integer(*c, where + ".cells")), std::move(quality));
  }
  fail(where + ".kind", "unknown cost kind \"" + k + "\" (want affine, power or entropy)");
}

AgentSpec parse_agent(const json& j, int id, const std::string& where) {
  expect_object(j, where);
  check_keys(j, where, {"tau_set", "tx_len", "delta_wait", "cost"});
  AgentSpec spec;
  spec.id = id;
  const json* taus = find(j, "tau_set");
  if (!taus) fail(where, "missing field \"tau_set\"");
  spec.tau_set = get_int_list(*taus, where + ".tau_set");
  if (const json* tx = find(j, "tx_len")) spec.tx_len = parse_tx_len(*tx, where + ".tx_len");
  if (const json* dw = find(j, "delta_wait"))
    spec.delta_wait = parse_delta_wait(*dw, where + ".delta_wait");
  const json* cost = find(j, "cost");
  if (!cost) fail(where, "missing field \"cost\"");
  spec.cost = parse_cost(*cost, where + ".cost");
  try {
    spec.validate();
  } catch (const DomainError& e) {
    fail(where, e.what());
  }
  return spec;
}

GridMapConfig parse_gridmap(const json& j, const std::string& where) {
  expect_object(j, where);
  check_keys(j, where, {"regions", "p_min", "p_max", "cells", "tau_set", "quality"});
  GridMapConfig cfg;
  if (const json* v = find(j, "regions"))
    cfg.regions = static_cast<int>(get_integer(*v, where + ".regions"));
  if (const json* v = find(j, "p_min")) cfg.p_min = get_number(*v, where + ".p_min");
  if (const json* v = find(j, "p_max")) cfg.p_max = get_number(*v, where + ".p_max");
  if (const json* v = find(j, "cells")) {
    // scalar = every region the same size; array = one entry per region
    if (v->is_array())
      cfg.region_cells = get_int_list(*v, where + ".cells");
    else
      cfg.cells = static_cast<int>(get_integer(*v, where + ".cells"));
  }
  if (const json* v = find(j, "tau_set")) cfg.tau_set = get_int_list(*v, where + ".tau_set");
  if (const json* v = find(j, "quality")) cfg.quality = parse_quality(*v, where + ".quality");
  return cfg;
}

OptimizerConfig parse_optimizer(const json& j, const std::string& where) {
  expect_object(j, where);
  check_keys(j, where, {"c_init", "step", "util_tol", "max_iterations", "mode"});
  OptimizerConfig cfg;
  if (const json* v = find(j, "c_init")) cfg.c_init = get_number(*v, where + ".c_init");
  if (const json* v = find(j, "step")) cfg.step = get_number(*v, where + ".step");
  if (const json* v = find(j, "util_tol")) cfg.util_tol = get_number(*v, where + ".util_tol");
  if (const json* v = find(j, "max_iterations"))
    cfg.max_iterations = static_cast<int>(get_integer(*v, where + ".max_iterations"));
  if (const json* v = find(j, "mode")) {
    std::string m = get_string(*v, where + ".mode");
    if (m == "dual-ascent") cfg.mode = OptMode::DualAscent;
    else if (m == "bisection") cfg.mode = OptMode::Bisection;
    else if (m == "hybrid") cfg.mode = OptMode::Hybrid;
    else fail(where + ".mode", "unknown mode \"" + m + "\"");
  }
  if (cfg.c_init < 0.0) fail(where + ".c_init", "must be >= 0");
  if (cfg.step <= 0.0) fail(where + ".step", "must be > 0");
  if (cfg.util_tol <= 0.0) fail(where + ".util_tol", "must be > 0");
  if (cfg.max_iterations < 1) fail(where + ".max_iterations", "must be >= 1");
  return cfg;
}

SimulationConfig parse_simulation(const json& j, const std::string& where) {
  expect_object(j, where);
  check_keys(j, where,
             {"horizon", "seeds", "seed_base", "burn_in", "policies", "taus"});
  SimulationConfig cfg;
  if (const json* v = find(j, "horizon")) cfg.horizon = get_integer(*v, where + ".horizon");
  if (const json* v = find(j, "seeds"))
    cfg.seeds = static_cast<int>(get_integer(*v, where + ".seeds"));
  if (const json* v = find(j, "seed_base"))
    cfg.seed_base = static_cast<std::uint64_t>(get_integer(*v, where + ".seed_base"));
  if (const json* v = find(j, "burn_in")) cfg.burn_in = get_number(*v, where + ".burn_in");
  if (const json* v = find(j, "policies")) {
    if (!v->is_array()) fail(where + ".policies", "expected an array of policy names");
    cfg.policies.clear();
    for (size_t i = 0; i < v->size(); ++i) {
      std::string p = get_string((*v)[i], where + ".policies[" + std::to_string(i) + "]");
      if (std::find(kKnownPolicies.begin(), kKnownPolicies.end(), p) == kKnownPolicies.end())
        fail(where + ".policies", "unknown policy \"" + p + "\"");
      cfg.policies.push_back(std::move(p));
    }
    if (cfg.policies.empty()) fail(where + ".policies", "must not be empty");
  }
  if (const json* v = find(j, "taus")) cfg.taus = get_int_list(*v, where + ".taus");
  if (cfg.horizon < 1) fail(where + ".horizon", "must be >= 1");
  if (cfg.seeds < 1) fail(where + ".seeds", "must be >= 1");
  if (cfg.burn_in < 0.0 || cfg.burn_in >= 1.0) fail(where + ".burn_in", "must lie in [0, 1)");
  return cfg;
}

OutputConfig parse_output(const json& j, const std::string& where) {
  expect_object(j, where);
  check_keys(j, where, {"dir", "trace"});
  OutputConfig cfg;
  if (const json* v = find(j, "dir")) cfg.dir = get_string(*v, where + ".dir");
  if (const json* v = find(j, "trace")) cfg.trace = get_bool(*v, where + ".trace");
  return cfg;
}

json emit_tx_len(const TxLen& tx) {
  switch (tx.rule) {
    case TxLen::Rule::Mapping: return "mapping";
    case TxLen::Rule::Identity: return "identity";
    case TxLen::Rule::Table: {
      json t = json::object();
      for (const auto& [tau, r] : tx.table) t[std::to_string(tau)] = r;
      return t;
    }
  }
  return "mapping";
}

json emit_quality(const QualityMap& q) {
  if (q.rule == QualityMap::Rule::ExpSaturation) return "exp-saturation";
  json t = json::object();
  for (const auto& [tau, v] : q.table) t[std::to_string(tau)] = v;
  return t;
}

json emit_cost(const CostModel& cost) {
  json j = json::object();
  j["kind"] = cost.kind();
  if (const auto* a = dynamic_cast<const AffineAoiCost*>(&cost)) {
    j["q_hat"] = a->q_hat();
    j["slope"] = a->slope();
  } else if (const auto* p = dynamic_cast<const PowerAoiCost*>(&cost)) {
    j["scale"] = p->scale();
    j["exponent"] = p->exponent();
    j["tau_decay"] = p->tau_decay();
  } else if (const auto* e = dynamic_cast<const EntropyGridCost*>(&cost)) {
    j["flip_prob"] = e->flip_prob();
    j["cells"] = e->num_cells();
    j["quality"] = emit_quality(e->quality());
  } else {
    throw DomainError("emit_scenario: cost model \"" + std::string(cost.kind()) +
                      "\" has no serialized form");
  }
  return j;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario: invalid JSON: ") + e.what());
  }
  expect_object(root, "scenario");
  check_keys(root, "scenario", {"agents", "gridmap", "optimizer", "simulation", "output"});

  Scenario sc;
  sc.name = name;
  const json* agents = find(root, "agents");
  const json* gridmap = find(root, "gridmap");
  if (agents && gridmap) fail("scenario", "give either \"agents\" or \"gridmap\", not both");
  if (!agents && !gridmap) fail("scenario", "missing \"agents\" or \"gridmap\"");
  if (agents) {
    if (!agents->is_array() || agents->empty())
      fail("scenario.agents", "expected a non-empty array");
    for (size_t i = 0; i < agents->size(); ++i)
      sc.agents.push_back(parse_agent((*agents)[i], static_cast<int>(i),
                                      "agents[" + std::to_string(i) + "]"));
  } else {
    sc.gridmap = parse_gridmap(*gridmap, "gridmap");
    try {
      sc.agents = build_scenario(*sc.gridmap);
    } catch (const DomainError& e) {
      fail("gridmap", e.what());
    }
  }
  if (const json* v = find(root, "optimizer")) sc.optimizer = parse_optimizer(*v, "optimizer");
  if (const json* v = find(root, "simulation"))
    sc.simulation = parse_simulation(*v, "simulation");
  if (const json* v = find(root, "output")) sc.output = parse_output(*v, "output");
  if (!sc.simulation.taus.empty() && sc.simulation.taus.size() != sc.agents.size())
    fail("simulation.taus", "expected one tau per agent (" +
                                std::to_string(sc.agents.size()) + ")");
  if (!sc.simulation.taus.empty()) {
    for (size_t i = 0; i < sc.agents.size(); ++i) {
      if (!sc.agents[i].has_tau(sc.simulation.taus[i]))
        fail("simulation.taus", "tau=" + std::to_string(sc.simulation.taus[i]) +
                                    " not admissible for agent " + std::to_string(i));
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string stem = path;
  if (auto slash = stem.find_last_of("/\\"); slash != std::string::npos)
    stem = stem.substr(slash + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos && dot > 0)
    stem = stem.substr(0, dot);
  return parse_scenario(buf.str(), stem);
}

std::string emit_scenario(const Scenario& scenario) {
  json root = json::object();
  if (scenario.gridmap) {
    const GridMapConfig& g = *scenario.gridmap;
    json j = json::object();
    j["regions"] = g.regions;
    j["p_min"] = g.p_min;
    j["p_max"] = g.p_max;
    if (g.region_cells.empty())
      j["cells"] = g.cells;
    else
      j["cells"] = g.region_cells;
    if (!g.tau_set.empty()) j["tau_set"] = g.tau_set;
    j["quality"] = emit_quality(g.quality);
    root["gridmap"] = j;
  } else {
    json arr = json::array();
    for (const AgentSpec& a : scenario.agents) {
      json j = json::object();
      j["tau_set"] = a.tau_set;
      j["tx_len"] = emit_tx_len(a.tx_len);
      if (a.delta_wait.uniform_phase_mean)
        j["delta_wait"] = "uniform-phase-mean";
      else
        j["delta_wait"] = a.delta_wait.value;
      if (!a.cost) throw DomainError("emit_scenario: agent without cost model");
      j["cost"] = emit_cost(*a.cost);
      arr.push_back(j);
    }
    root["agents"] = arr;
  }

  json opt = json::object();
  opt["c_init"] = scenario.optimizer.c_init;
  opt["step"] = scenario.optimizer.step;
  opt["util_tol"] = scenario.optimizer.util_tol;
  opt["max_iterations"] = scenario.optimizer.max_iterations;
  opt["mode"] = scenario.optimizer.mode == OptMode::DualAscent ? "dual-ascent"
                : scenario.optimizer.mode == OptMode::Bisection ? "bisection"
                                                                : "hybrid";
  root["optimizer"] = opt;

  json sim = json::object();
  sim["horizon"] = scenario.simulation.horizon;
  sim["seeds"] = scenario.simulation.seeds;
  sim["seed_base"] = scenario.simulation.seed_base;
  sim["burn_in"] = scenario.simulation.burn_in;
  sim["policies"] = scenario.simulation.policies;
  if (!scenario.simulation.taus.empty()) sim["taus"] = scenario.simulation.taus;
  root["simulation"] = sim;

  json out = json::object();
  out["dir"] = scenario.output.dir;
  out["trace"] = scenario.output.trace;
  root["output"] = out;

  return root.dump(2) + "\n";
}

}  // namespace aoico
