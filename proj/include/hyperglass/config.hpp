#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperglass/anneal.hpp"
#include "hyperglass/enumerate.hpp"
#include "hyperglass/rng.hpp"

namespace hyperglass {

using Json = nlohmann::ordered_json;

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline const char* solver_kind_name(SolverKind k) {
  switch (k) {
    case SolverKind::automatic: return "automatic";
    case SolverKind::exact: return "exact";
    case SolverKind::anneal: return "anneal";
    case SolverKind::anneal_ising: return "anneal_ising";
    case SolverKind::anneal_sparse_ising: return "anneal_sparse_ising";
  }
  return "?";
}

inline SolverKind solver_kind_from(const std::string& s) {
  for (auto k : {SolverKind::automatic, SolverKind::exact, SolverKind::anneal, SolverKind::anneal_ising,
                 SolverKind::anneal_sparse_ising})
    if (s == solver_kind_name(k)) return k;
  throw ConfigError("unknown solver kind '" + s + "'");
}

inline void reject_unknown_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

inline Json solver_to_json(const SolverSpec& s) {
  return Json{{"kind", solver_kind_name(s.kind)},   {"beta_min", s.schedule.beta_min},
              {"beta_max", s.schedule.beta_max},    {"sweeps", s.schedule.sweeps},
              {"restarts", s.schedule.restarts},    {"budget", s.budget}};
}

inline SolverSpec solver_from_json(const Json& j) {
  reject_unknown_keys(j, {"kind", "beta_min", "beta_max", "sweeps", "restarts", "budget"}, "solver");
  SolverSpec s;
  try {
    if (j.contains("kind")) s.kind = solver_kind_from(j.at("kind").get<std::string>());
    if (j.contains("beta_min")) s.schedule.beta_min = j.at("beta_min").get<double>();
    if (j.contains("beta_max")) s.schedule.beta_max = j.at("beta_max").get<double>();
    if (j.contains("sweeps")) s.schedule.sweeps = j.at("sweeps").get<std::uint64_t>();
    if (j.contains("restarts")) s.schedule.restarts = j.at("restarts").get<unsigned>();
    if (j.contains("budget")) s.budget = j.at("budget").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }
  if (!(s.schedule.beta_min > 0 && s.schedule.beta_max >= s.schedule.beta_min))
    throw ConfigError("solver: need 0 < beta_min <= beta_max");
  if (s.schedule.sweeps == 0 || s.schedule.restarts == 0) throw ConfigError("solver: sweeps and restarts must be positive");
  return s;
}

// Parameters each experiment accepts, with defaults for the optional ones.
struct ExperimentSchema {
  std::vector<std::string> required;
  Json defaults;
};

inline const std::map<std::string, ExperimentSchema>& experiment_schemas() {
  static const std::map<std::string, ExperimentSchema> schemas = {
      {"interpolation_gap",
       {{"n", "d"}, Json{{"p", 2}, {"q", 2}, {"beta", 1.0}, {"kernel", "cut"}, {"law", "poisson"}}}},
      {"sqrt_d_coefficient", {{"problem", "n", "d"}, Json{{"q", 2}, {"p", 3}, {"xi", 1.0}}}},
      {"er_vs_regular", {{"n", "d"}, Json{{"p", 2}, {"q", 2}, {"kernel", "cut"}}}},
      {"concentration_scan", {{"n", "d"}, Json{{"q", 2}}}},
      {"beta_schedule", {{"d"}, Json{{"delta", 0.125}, {"D", 1.0}, {"q", 2}}}},
      {"pspin_ground_state", {{"n"}, Json{{"p", 2}}}},
      {"sbm_surrogate", {{"n"}, Json{{"xi", 1.0}, {"balanced", true}}}},
  };
  return schemas;
}

// A declarative run: scalar or list-valued parameters expanded as a cartesian
// grid (keys in sorted order, last key varying fastest).
struct RunConfig {
  std::string experiment;
  std::map<std::string, Json> params;
  std::uint64_t seed = 1;
  std::size_t replicas = 16;
  SolverSpec solver{};
  std::string ledger = "ledger.jsonl";
  std::string csv;
  unsigned threads = 0;  // 0: HYPERGLASS_THREADS or 1

  std::size_t cell_count() const {
    std::size_t c = 1;
    for (const auto& [k, v] : params) c *= v.is_array() ? v.size() : 1;
    return c;
  }

  // Parameters of cell `index` with defaults filled in.
  Json cell_params(std::size_t index) const {
    Json out = Json::object();
    std::vector<std::pair<std::string, const Json*>> keys;
    for (const auto& [k, v] : params) keys.emplace_back(k, &v);
    std::size_t rest = index;
    std::map<std::string, Json> chosen;
    for (auto it = keys.rbegin(); it != keys.rend(); ++it) {
      const Json& v = *it->second;
      if (v.is_array()) {
        chosen[it->first] = v.at(rest % v.size());
        rest /= v.size();
      } else {
        chosen[it->first] = v;
      }
    }
    for (const auto& [k, v] : experiment_schemas().at(experiment).defaults.items()) out[k] = v;
    for (const auto& [k, v] : chosen) out[k] = v;
    return out;
  }

  std::uint64_t cell_seed(std::size_t index) const { return derive_seed(seed, index); }
};

inline Json to_json(const RunConfig& c) {
  Json j{{"experiment", c.experiment}};
  for (const auto& [k, v] : c.params) j[k] = v;
  j["seed"] = c.seed;
  j["replicas"] = c.replicas;
  j["solver"] = solver_to_json(c.solver);
  j["ledger"] = c.ledger;
  if (!c.csv.empty()) j["csv"] = c.csv;
  if (c.threads) j["threads"] = c.threads;
  return j;
}

inline RunConfig run_config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("experiment")) throw ConfigError("config needs 'experiment'");
  RunConfig c;
  c.experiment = j.at("experiment").get<std::string>();
  const auto it = experiment_schemas().find(c.experiment);
  if (it == experiment_schemas().end()) throw ConfigError("unknown experiment '" + c.experiment + "'");
  const ExperimentSchema& schema = it->second;
  std::set<std::string> param_keys(schema.required.begin(), schema.required.end());
  for (const auto& [k, v] : schema.defaults.items()) param_keys.insert(k);
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "experiment") continue;
      if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "replicas") c.replicas = value.get<std::size_t>();
      else if (key == "solver") c.solver = solver_from_json(value);
      else if (key == "ledger") c.ledger = value.get<std::string>();
      else if (key == "csv") c.csv = value.get<std::string>();
      else if (key == "threads") c.threads = value.get<unsigned>();
      else if (param_keys.count(key)) {
        if (value.is_array() && value.empty()) throw ConfigError("parameter '" + key + "' has an empty grid");
        if (value.is_object()) throw ConfigError("parameter '" + key + "' must be a scalar or a list");
        c.params[key] = value;
      } else {
        throw ConfigError("unknown key '" + key + "' for experiment " + c.experiment);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& r : schema.required)
    if (!c.params.count(r)) throw ConfigError("experiment " + c.experiment + " needs parameter '" + r + "'");
  if (c.replicas < 2 && c.experiment != "beta_schedule") throw ConfigError("replicas must be at least 2");
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return run_config_from_json(j);
}

}  // namespace hyperglass
