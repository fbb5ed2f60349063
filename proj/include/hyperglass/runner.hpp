#pragma once

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "hyperglass/config.hpp"
#include "hyperglass/experiments.hpp"
#include "hyperglass/version.hpp"

namespace hyperglass {

struct CellResult {
  Json estimates = Json::object();  // name -> {mean, sem}
  Json metadata = Json::object();
};

namespace detail {

inline void put(CellResult& r, const std::string& name, double mean, double sem) {
  r.estimates[name] = Json{{"mean", mean}, {"sem", sem}};
}

inline Kernel kernel_from(const Json& params) {
  const std::string name = params.at("kernel").get<std::string>();
  const unsigned q = params.at("q").get<unsigned>();
  const unsigned p = params.at("p").get<unsigned>();
  if (name == "cut") {
    if (p != 2) throw std::invalid_argument("cut kernel has p = 2");
    return Kernel::cut(q);
  }
  if (name == "parity") {
    if (q != 2) throw std::invalid_argument("parity kernel has q = 2");
    return Kernel::parity(p);
  }
  if (name == "single_label") {
    if (p != 2) throw std::invalid_argument("single_label kernel has p = 2");
    return Kernel::single_label(q, 0);
  }
  throw std::invalid_argument("unknown kernel '" + name + "' (cut, parity, single_label)");
}

inline Vertex vertex_count(const Json& params) {
  const auto n = params.at("n").get<std::int64_t>();
  if (n < 1) throw std::invalid_argument("n must be positive");
  return static_cast<Vertex>(n);
}

}  // namespace detail

// One experiment cell: deterministic given (experiment, params, replicas, solver, seed).
inline CellResult run_cell(const std::string& experiment, const Json& params, std::size_t replicas,
                           const SolverSpec& solver, std::uint64_t seed) {
  CellResult r;
  if (experiment == "interpolation_gap") {
    const std::string law = params.at("law").get<std::string>();
    if (law != "poisson" && law != "bernoulli") throw std::invalid_argument("law must be poisson or bernoulli");
    const auto g = interpolation_gap(detail::vertex_count(params), params.at("p").get<unsigned>(),
                                     params.at("d").get<double>(), params.at("beta").get<double>(),
                                     detail::kernel_from(params), replicas, seed,
                                     law == "poisson" ? EntryLaw::poisson : EntryLaw::bernoulli);
    detail::put(r, "phi1", g.phi1.mean, g.phi1.sem);
    detail::put(r, "phi2", g.phi2.mean, g.phi2.sem);
    detail::put(r, "gap_over_beta", g.gap_over_beta, g.gap_sem);
    r.metadata["probability_clamped"] = g.clamped;
  } else if (experiment == "sqrt_d_coefficient") {
    const auto problem = sqrt_d_problem_from(params.at("problem").get<std::string>());
    const unsigned aq = problem == SqrtDProblem::xorsat ? params.at("p").get<unsigned>() : params.at("q").get<unsigned>();
    const auto row = sqrt_d_coefficient(problem, detail::vertex_count(params), params.at("d").get<double>(), aq,
                                        params.at("xi").get<double>(), replicas, solver, seed);
    detail::put(r, "value", row.value.mean, row.value.sem);
    detail::put(r, "coefficient", row.coefficient.mean, row.coefficient.sem);
    r.metadata["leading"] = row.leading;
    r.metadata["scale"] = row.scale;
    r.metadata["probability_clamped"] = row.clamped;
  } else if (experiment == "er_vs_regular") {
    const auto e = er_vs_regular(detail::kernel_from(params), detail::vertex_count(params),
                                 params.at("d").get<unsigned>(), replicas, solver, seed);
    detail::put(r, "v_er", e.v_er.mean, e.v_er.sem);
    detail::put(r, "v_reg", e.v_reg.mean, e.v_reg.sem);
    detail::put(r, "diff", e.diff.mean, e.diff.sem);
    detail::put(r, "diff_over_sqrt_d", e.diff_over_sqrt_d, e.diff_over_sqrt_d_sem);
    r.metadata["conditions_hold"] = e.conditions_hold;
    r.metadata["exploratory"] = e.exploratory;
  } else if (experiment == "concentration_scan") {
    const auto c = concentration_cell(detail::vertex_count(params), params.at("d").get<double>(),
                                      params.at("q").get<unsigned>(), replicas, solver, seed);
    detail::put(r, "mean", c.mean, std::sqrt(c.variance / static_cast<double>(c.replicas)));
    detail::put(r, "variance", c.variance, c.variance * std::sqrt(2.0 / static_cast<double>(c.replicas - 1)));
  } else if (experiment == "beta_schedule") {
    const double d = params.at("d").get<double>();
    const double delta = params.at("delta").get<double>();
    detail::put(r, "beta", beta_schedule(d, delta), 0.0);
    detail::put(r, "combined_bound",
                combined_bound(d, delta, params.at("D").get<double>(), params.at("q").get<unsigned>()), 0.0);
  } else if (experiment == "pspin_ground_state") {
    const auto e = pspin_ground_state(detail::vertex_count(params), params.at("p").get<unsigned>(), solver,
                                      replicas, seed);
    detail::put(r, "energy_density", e.mean, e.sem);
  } else if (experiment == "sbm_surrogate") {
    const auto e = sbm_surrogate(detail::vertex_count(params), params.at("xi").get<double>(),
                                 params.at("balanced").get<bool>(), solver, replicas, seed);
    detail::put(r, "energy_density", e.mean, e.sem);
  } else {
    throw std::invalid_argument("unknown experiment '" + experiment + "'");
  }
  return r;
}

// One ledger line. Every field needed to recompute the cell is stored.
struct ExperimentRecord {
  std::string id;
  std::string experiment;
  std::size_t cell = 0;
  std::uint64_t seed = 0;       // run seed
  std::uint64_t cell_seed = 0;  // derived seed actually used
  std::size_t replicas = 0;
  Json params = Json::object();
  SolverSpec solver{};
  std::string status = "ok";
  std::string error;
  Json estimates = Json::object();
  Json metadata = Json::object();
  std::string started_at;
  double wall_time_s = 0.0;
  std::string code_version = kVersion;
};

inline Json to_json(const ExperimentRecord& r) {
  return Json{{"id", r.id},
              {"experiment", r.experiment},
              {"cell", r.cell},
              {"seed", r.seed},
              {"cell_seed", r.cell_seed},
              {"replicas", r.replicas},
              {"params", r.params},
              {"solver", solver_to_json(r.solver)},
              {"status", r.status},
              {"error", r.error},
              {"estimates", r.estimates},
              {"metadata", r.metadata},
              {"started_at", r.started_at},
              {"wall_time_s", r.wall_time_s},
              {"code_version", r.code_version}};
}

inline ExperimentRecord record_from_json(const Json& j) {
  ExperimentRecord r;
  r.id = j.at("id").get<std::string>();
  r.experiment = j.at("experiment").get<std::string>();
  r.cell = j.at("cell").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.cell_seed = j.at("cell_seed").get<std::uint64_t>();
  r.replicas = j.at("replicas").get<std::size_t>();
  r.params = j.at("params");
  r.solver = solver_from_json(j.at("solver"));
  r.status = j.at("status").get<std::string>();
  r.error = j.value("error", "");
  r.estimates = j.at("estimates");
  r.metadata = j.value("metadata", Json::object());
  r.started_at = j.value("started_at", "");
  r.wall_time_s = j.value("wall_time_s", 0.0);
  r.code_version = j.value("code_version", "");
  return r;
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline ExperimentRecord execute_cell(const RunConfig& c, std::size_t index) {
  ExperimentRecord r;
  r.experiment = c.experiment;
  r.cell = index;
  r.seed = c.seed;
  r.cell_seed = c.cell_seed(index);
  r.replicas = c.replicas;
  r.params = c.cell_params(index);
  r.solver = c.solver;
  char id[64];
  std::snprintf(id, sizeof id, "%zu-%016" PRIx64, index, r.cell_seed);
  r.id = c.experiment + "-" + id;
  r.started_at = utc_timestamp();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const CellResult res = run_cell(r.experiment, r.params, r.replicas, r.solver, r.cell_seed);
    r.estimates = res.estimates;
    r.metadata = res.metadata;
  } catch (const std::exception& e) {
    r.status = "error";
    r.error = e.what();
  }
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Recomputes the estimates of a stored record.
inline Json replay(const ExperimentRecord& r) {
  return run_cell(r.experiment, r.params, r.replicas, r.solver, r.cell_seed).estimates;
}

inline void append_record(const std::string& path, const ExperimentRecord& r) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to ledger " + path);
  out << to_json(r).dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed on ledger " + path);
}

inline std::vector<ExperimentRecord> read_ledger(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ledger " + path);
  std::vector<ExperimentRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(Json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

struct RunSummary {
  std::size_t cells = 0;
  std::size_t failed = 0;
  bool ok() const { return failed == 0; }
};

// Runs every cell in order and appends one record per cell; a failing cell is
// recorded with its error and the run continues.
inline RunSummary run(const RunConfig& c, const std::function<void(const ExperimentRecord&)>& sink = {}) {
  RunSummary s;
  const std::size_t cells = c.cell_count();
  for (std::size_t i = 0; i < cells; ++i) {
    const ExperimentRecord r = execute_cell(c, i);
    append_record(c.ledger, r);
    if (sink) sink(r);
    ++s.cells;
    if (r.status != "ok") ++s.failed;
  }
  return s;
}

// Long format: one row per (cell, estimate).
inline constexpr const char* kCsvHeader = "experiment,cell,seed,n,p,q,d,beta,replicas,estimate,mean,sem";

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline std::string csv_field(const Json& params, const char* key) {
  if (!params.contains(key)) return "";
  const Json& v = params.at(key);
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) return format_double(v.get<double>());
  return "";
}

}  // namespace detail

inline void export_csv(std::ostream& os, const std::vector<ExperimentRecord>& records,
                       const std::function<bool(const ExperimentRecord&)>& select = {}) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    if (select && !select(r)) continue;
    for (const auto& [name, est] : r.estimates.items()) {
      os << r.experiment << ',' << r.cell << ',' << r.cell_seed << ',' << detail::csv_field(r.params, "n") << ','
         << detail::csv_field(r.params, "p") << ',' << detail::csv_field(r.params, "q") << ','
         << detail::csv_field(r.params, "d") << ',' << detail::csv_field(r.params, "beta") << ',' << r.replicas
         << ',' << name << ',' << format_double(est.at("mean").get<double>()) << ','
         << format_double(est.at("sem").get<double>()) << '\n';
    }
  }
}

}  // namespace hyperglass
