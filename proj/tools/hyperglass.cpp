#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hyperglass/runner.hpp"

using namespace hyperglass;

namespace {

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

struct GenOptions {
  std::string kind;
  Vertex n = 0;
  unsigned p = 2;
  double d = 0.0;
  double xi = 1.0;
  std::optional<double> a, b;
  std::uint64_t seed = 1;
  std::string out;
};

void gen_instance(const GenOptions& o) {
  Rng rng(o.seed);
  std::ofstream file;
  std::ostream& os = open_out(o.out, file);
  if (o.kind == "er") {
    const Hypergraph g = gen_er_hypergraph(o.n, o.p, o.d, rng);
    if (g.probability_clamped()) std::cerr << "note: edge probability clamped to 1\n";
    write_hypergraph(os, g);
  } else if (o.kind == "regular") {
    if (o.d != std::floor(o.d) || o.d < 0) throw std::invalid_argument("regular needs an integer degree d");
    write_hypergraph(os, gen_configuration_regular(o.n, o.p, static_cast<unsigned>(o.d), rng));
  } else if (o.kind == "poisson") {
    write_hypergraph(os, gen_poisson_cloning(o.n, o.p, o.d, rng));
  } else if (o.kind == "sbm") {
    double a, b;
    if (o.a && o.b) {
      a = *o.a;
      b = *o.b;
    } else {
      std::tie(a, b) = sbm_rates(o.d, o.xi);
    }
    write_sbm(os, gen_sbm(o.n, a, b, rng));
  } else if (o.kind == "xorsat") {
    write_xorsat(os, gen_xorsat(o.n, o.p, o.d, rng));
  } else {
    throw std::invalid_argument("unknown kind '" + o.kind + "' (er, regular, poisson, sbm, xorsat)");
  }
  if (!os) throw std::runtime_error("write failed");
}

struct SolveOptions {
  std::string instance;
  std::string format = "hypergraph";
  std::string kernel = "cut";
  unsigned q = 2;
  std::string solver = "automatic";
  std::uint64_t sweeps = 20000;
  unsigned restarts = 8;
  std::uint64_t seed = 1;
};

Json solve_instance(const SolveOptions& o) {
  std::ifstream in(o.instance);
  if (!in) throw std::runtime_error("cannot open " + o.instance);
  SolverSpec spec;
  spec.kind = solver_kind_from(o.solver);
  spec.schedule.sweeps = o.sweeps;
  spec.schedule.restarts = o.restarts;
  Rng rng(o.seed);
  Json out{{"instance", o.instance}, {"format", o.format}};
  if (o.format == "hypergraph") {
    const Hypergraph g = read_hypergraph(in);
    Kernel k = o.kernel == "parity" ? Kernel::parity(g.p()) : Kernel::cut(o.q);
    if (o.kernel != "cut" && o.kernel != "parity") throw std::invalid_argument("kernel must be cut or parity");
    const Problem pr = Problem::from_hypergraph(g, k);
    const SolveResult r = solve(pr, ConstraintSet::all(), spec, rng);
    out["n"] = g.n();
    out["edges"] = g.edge_count();
    out["kernel"] = k.name();
    out["hamiltonian"] = r.value;
    if (o.kernel == "cut") out["cut"] = qcut_value(g, o.q, r.config);
    out["method"] = r.method;
  } else if (o.format == "xorsat") {
    const XorsatInstance inst = read_xorsat(in);
    const SolveResult r = solve(Problem::from_xorsat(inst), ConstraintSet::all(), spec, rng);
    out["n"] = inst.n;
    out["clauses"] = inst.clauses.size();
    out["satisfied"] = xorsat_satisfied(inst, r.config);
    out["method"] = r.method;
  } else if (o.format == "sbm") {
    const SbmGraph g = read_sbm(in);
    const Problem pr = Problem::from_hypergraph(g.graph, Kernel::cut(2).scaled(-1.0));
    const SolveResult r = solve(pr, ConstraintSet::balanced_bisection(), spec, rng);
    out["n"] = g.graph.n();
    out["edges"] = g.graph.edge_count();
    out["min_bisection"] = bisection_cut(g.graph, r.config);
    out["planted_cut"] = bisection_cut(g.graph, SpinConfig::from_signs(g.labels));
    out["method"] = r.method;
  } else {
    throw std::invalid_argument("format must be hypergraph, xorsat or sbm");
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random hypergraph optimization and Gaussian surrogate laboratory"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: HYPERGLASS_THREADS or 1)");

  auto* run_cmd = app.add_subcommand("run", "Run an experiment config, appending to the ledger");
  std::string config_path, out_path;
  std::optional<std::uint64_t> seed_override;
  run_cmd->add_option("--config", config_path, "JSON run config")->required();
  run_cmd->add_option("--seed", seed_override, "Override the config seed");
  run_cmd->add_option("--out", out_path, "Ledger path (overrides the config)");

  auto* export_cmd = app.add_subcommand("export", "Export ledger rows as CSV");
  std::string ledger_path, export_out, select_experiment, select_status;
  export_cmd->add_option("ledger", ledger_path, "JSONL ledger")->required();
  export_cmd->add_option("--experiment", select_experiment, "Only rows of this experiment");
  export_cmd->add_option("--status", select_status, "Only rows with this status (ok, error)");
  export_cmd->add_option("--out", export_out, "CSV path (default stdout)");

  auto* gen_cmd = app.add_subcommand("gen-instance", "Write a random instance in the text format");
  GenOptions gen;
  gen_cmd->add_option("kind", gen.kind, "er, regular, poisson, sbm or xorsat")->required();
  gen_cmd->add_option("--n", gen.n, "Vertices")->required();
  gen_cmd->add_option("--p", gen.p, "Edge arity");
  gen_cmd->add_option("--d", gen.d, "Mean degree");
  gen_cmd->add_option("--xi", gen.xi, "SBM signal-to-noise ratio");
  gen_cmd->add_option("--a", gen.a, "SBM within-community rate");
  gen_cmd->add_option("--b", gen.b, "SBM across-community rate");
  gen_cmd->add_option("--seed", gen.seed, "Seed");
  gen_cmd->add_option("--out", gen.out, "Output path (default stdout)");

  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance file");
  SolveOptions so;
  solve_cmd->add_option("instance", so.instance, "Instance file")->required();
  solve_cmd->add_option("--format", so.format, "hypergraph, xorsat or sbm");
  solve_cmd->add_option("--kernel", so.kernel, "cut or parity (hypergraph format)");
  solve_cmd->add_option("--q", so.q, "Alphabet size for the cut kernel");
  solve_cmd->add_option("--solver", so.solver, "automatic, exact, anneal, anneal_ising, anneal_sparse_ising");
  solve_cmd->add_option("--sweeps", so.sweeps, "Annealing sweeps per restart");
  solve_cmd->add_option("--restarts", so.restarts, "Annealing restarts");
  solve_cmd->add_option("--seed", so.seed, "Seed");

  app.add_subcommand("version", "Print the version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads) set_default_threads(threads);
    if (run_cmd->parsed()) {
      RunConfig c = load_run_config(config_path);
      if (seed_override) c.seed = *seed_override;
      if (!out_path.empty()) c.ledger = out_path;
      if (c.threads && !threads) set_default_threads(c.threads);
      const RunSummary s = run(c, [](const ExperimentRecord& r) {
        std::cerr << r.id << ' ' << r.status;
        if (!r.error.empty()) std::cerr << ": " << r.error;
        std::cerr << " (" << r.wall_time_s << " s)\n";
      });
      if (!c.csv.empty()) {
        std::ofstream csv(c.csv);
        export_csv(csv, read_ledger(c.ledger));
      }
      std::cerr << s.cells << " cells, " << s.failed << " failed\n";
      return s.ok() ? 0 : 1;
    }
    if (export_cmd->parsed()) {
      const auto records = read_ledger(ledger_path);
      std::ofstream file;
      std::ostream& os = open_out(export_out, file);
      export_csv(os, records, [&](const ExperimentRecord& r) {
        return (select_experiment.empty() || r.experiment == select_experiment) &&
               (select_status.empty() || r.status == select_status);
      });
      return os ? 0 : 1;
    }
    if (gen_cmd->parsed()) {
      gen_instance(gen);
      return 0;
    }
    if (solve_cmd->parsed()) {
      std::cout << solve_instance(so).dump() << '\n';
      return 0;
    }
    std::cout << "hyperglass " << kVersion << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
