#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "hyperglass/anneal.hpp"
#include "hyperglass/combinatorics.hpp"
#include "hyperglass/enumerate.hpp"
#include "hyperglass/kernel.hpp"
#include "hyperglass/objectives.hpp"
#include "hyperglass/parallel.hpp"
#include "hyperglass/problem.hpp"
#include "hyperglass/rng.hpp"
#include "hyperglass/stats.hpp"

namespace hyperglass {

enum class TensorMode { iid_array, standard_symmetric, kernel_variance };

// Symmetric Gaussian p-array. Distinct sorted tuples live in a dense vector
// indexed by colex rank; tuples with a repeated index are stored only when the
// tensor is `unrestricted` (sums then run over all n^p index tuples).
class GaussianTensor {
 public:
  GaussianTensor(Vertex n, unsigned p, TensorMode mode, bool unrestricted)
      : n_(n), p_(p), mode_(mode), unrestricted_(unrestricted), distinct_(binomial(n, p), 0.0) {
    if (p < 1 || n < p) throw std::invalid_argument("GaussianTensor needs n >= p >= 1");
  }

  Vertex n() const noexcept { return n_; }
  unsigned p() const noexcept { return p_; }
  TensorMode mode() const noexcept { return mode_; }
  bool unrestricted() const noexcept { return unrestricted_; }

  double at(Tuple t) const {
    if (t.size() != p_) throw std::invalid_argument("GaussianTensor: arity mismatch");
    std::sort(t.begin(), t.end());
    if (t.back() >= n_) throw std::invalid_argument("GaussianTensor: index out of range");
    if (!has_repeats(t)) return distinct_[subset_rank(t)];
    auto it = repeated_.find(t);
    return it == repeated_.end() ? 0.0 : it->second;
  }

  void set(Tuple t, double v) {
    std::sort(t.begin(), t.end());
    if (!has_repeats(t)) {
      distinct_[subset_rank(t)] = v;
    } else {
      if (!unrestricted_) throw std::invalid_argument("repeated index in a distinct-index tensor");
      repeated_[std::move(t)] = v;
    }
  }

  GaussianTensor scaled(double c) const {
    GaussianTensor out = *this;
    for (double& v : out.distinct_) v *= c;
    for (auto& [t, v] : out.repeated_) v *= c;
    return out;
  }

  // fn(sorted tuple, value) over distinct tuples (lexicographic), then repeated ones.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for_each_subset(n_, p_, [&](std::span<const Vertex> t) { fn(t, distinct_[subset_rank(t)]); });
    for (const auto& [t, v] : repeated_) fn(std::span<const Vertex>(t), v);
  }

  const std::vector<double>& distinct_values() const noexcept { return distinct_; }

 private:
  Vertex n_;
  unsigned p_;
  TensorMode mode_;
  bool unrestricted_;
  std::vector<double> distinct_;
  std::map<Tuple, double> repeated_;
};

namespace detail {

// Product of m_k! over the runs of a sorted tuple.
inline double run_factorials(std::span<const Vertex> sorted) {
  return static_cast<double>(factorial(static_cast<unsigned>(sorted.size()))) / static_cast<double>(orderings(sorted));
}

template <class Variance>
GaussianTensor sample_tensor(Vertex n, unsigned p, TensorMode mode, bool unrestricted, Rng& rng, Variance&& var) {
  GaussianTensor out(n, p, mode, unrestricted);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for_each_subset(n, p, [&](std::span<const Vertex> t) {
    out.set(Tuple(t.begin(), t.end()), std::sqrt(var(t)) * gauss(rng));
  });
  if (unrestricted) {
    for_each_multiset(n, p, [&](std::span<const Vertex> t) {
      if (has_repeats(t)) out.set(Tuple(t.begin(), t.end()), std::sqrt(var(t)) * gauss(rng));
    });
  }
  return out;
}

}  // namespace detail

// Standard symmetric p-tensor sampled entrywise: variance 1/(p-1)! on distinct
// tuples and p prod(m_k!)/p! on a tuple with multiplicities m_k.
inline GaussianTensor gen_standard_symmetric_tensor(Vertex n, unsigned p, Rng& rng, bool unrestricted = false) {
  const double pf = static_cast<double>(factorial(p));
  return detail::sample_tensor(n, p, TensorMode::standard_symmetric, unrestricted, rng,
                               [&](std::span<const Vertex> t) { return p * detail::run_factorials(t) / pf; });
}

// The same law built literally: J_t = sqrt(p)/p! * sum over permutations of an
// i.i.d. N(0,1) array V on all n^p index tuples.
inline GaussianTensor gen_standard_symmetric_tensor_pisum(Vertex n, unsigned p, Rng& rng, bool unrestricted = false) {
  const double cells = std::pow(static_cast<double>(n), static_cast<double>(p));
  if (cells > 5e7) throw std::invalid_argument("permutation-sum construction limited to n^p <= 5e7");
  std::vector<double> v(static_cast<std::size_t>(cells));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& x : v) x = gauss(rng);
  auto flat = [&](std::span<const Vertex> idx) {
    std::size_t f = 0;
    for (Vertex i : idx) f = f * n + i;
    return f;
  };
  GaussianTensor out(n, p, TensorMode::standard_symmetric, unrestricted);
  const double scale = std::sqrt(static_cast<double>(p)) / static_cast<double>(factorial(p));
  auto fill = [&](std::span<const Vertex> t) {
    std::vector<unsigned> perm(p);
    for (unsigned k = 0; k < p; ++k) perm[k] = k;
    Tuple permuted(p);
    double sum = 0.0;
    do {
      for (unsigned k = 0; k < p; ++k) permuted[k] = t[perm[k]];
      sum += v[flat(permuted)];
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.set(Tuple(t.begin(), t.end()), scale * sum);
  };
  if (unrestricted) {
    for_each_multiset(n, p, fill);
  } else {
    for_each_subset(n, p, fill);
  }
  return out;
}

// Independent N(0, kappa2) on distinct tuples.
inline GaussianTensor gen_kernel_variance_tensor(Vertex n, unsigned p, double kappa2, Rng& rng) {
  if (!(kappa2 >= 0.0)) throw std::invalid_argument("kappa2 must be non-negative");
  return detail::sample_tensor(n, p, TensorMode::kernel_variance, false, rng,
                               [&](std::span<const Vertex>) { return kappa2; });
}

// Symmetrisation of an i.i.d. N(0,1) array over all n^p tuples: the entry on a
// sorted tuple is the mean of its orderings, variance 1/#orderings. Sums over
// ordered tuples of this tensor have the law of sums of the i.i.d. array.
inline GaussianTensor gen_iid_array_tensor(Vertex n, unsigned p, Rng& rng) {
  return detail::sample_tensor(n, p, TensorMode::iid_array, true, rng, [&](std::span<const Vertex> t) {
    return 1.0 / static_cast<double>(orderings(t));
  });
}

// Symmetric Gaussian matrix: off-diagonal N(0,1), diagonal N(0,2).
struct GoeMatrix {
  Vertex n = 0;
  std::vector<double> a;
  double operator()(Vertex i, Vertex j) const noexcept { return a[static_cast<std::size_t>(i) * n + j]; }
};

inline GoeMatrix gen_goe(Vertex n, Rng& rng) {
  GoeMatrix g{n, std::vector<double>(static_cast<std::size_t>(n) * n)};
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Vertex i = 0; i < n; ++i) {
    g.a[static_cast<std::size_t>(i) * n + i] = std::sqrt(2.0) * gauss(rng);
    for (Vertex j = i + 1; j < n; ++j) {
      const double x = gauss(rng);
      g.a[static_cast<std::size_t>(i) * n + j] = x;
      g.a[static_cast<std::size_t>(j) * n + i] = x;
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Surrogate objectives T and S, resolved by type-count class.

// sum over ordered index tuples (distinct, or all) of f(sigma...), from label counts alone.
inline double kernel_count_sum(const Kernel& kernel, std::span<const std::size_t> counts, bool unrestricted,
                               std::span<const Spin> pinned = {}) {
  const unsigned p = kernel.p();
  const unsigned q = kernel.q();
  const std::size_t free = p - pinned.size();
  std::size_t combos = 1;
  for (std::size_t i = 0; i < free; ++i) combos *= q;
  std::vector<Spin> args(p);
  std::copy(pinned.begin(), pinned.end(), args.begin());
  std::vector<std::size_t> used(q);
  double total = 0.0;
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t rest = c;
    std::fill(used.begin(), used.end(), 0);
    double ways = 1.0;
    for (std::size_t k = pinned.size(); k < p; ++k) {
      args[k] = static_cast<Spin>(rest % q);
      rest /= q;
      const std::size_t avail = counts[args[k]];
      ways *= unrestricted ? static_cast<double>(avail)
                           : static_cast<double>(avail > used[args[k]] ? avail - used[args[k]] : 0);
      ++used[args[k]];
    }
    if (ways != 0.0) total += ways * kernel(args);
  }
  return total;
}

// alpha(sigma) = n^-p sum f(sigma_i1..sigma_ip), a function of the label counts.
inline double alpha_of_counts(const Kernel& kernel, std::span<const std::size_t> counts, bool unrestricted) {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  return kernel_count_sum(kernel, counts, unrestricted) / std::pow(static_cast<double>(n), kernel.p());
}

// Problem whose value is sum over ordered tuples of J f / n^((p-1)/2).
inline Problem gaussian_problem(const GaussianTensor& j, const Kernel& kernel) {
  if (j.p() != kernel.p()) throw std::invalid_argument("arity mismatch between tensor and kernel");
  Problem pr(j.n(), kernel);
  const double scale = 1.0 / std::pow(static_cast<double>(j.n()), (kernel.p() - 1) / 2.0);
  j.for_each([&](std::span<const Vertex> t, double v) {
    pr.add_term(Tuple(t.begin(), t.end()), static_cast<double>(orderings(t)) * v * scale);
  });
  return pr;
}

struct SurrogateLevel {
  std::vector<std::size_t> counts;
  double alpha = 0.0;
  double value = -std::numeric_limits<double>::infinity();  // (1/n) max of the random part
  SpinConfig argmax;
};

struct SurrogateBin {
  double alpha = 0.0;  // alpha of the best level in the bin
  double value = -std::numeric_limits<double>::infinity();
};

struct SurrogateTable {
  std::vector<SurrogateLevel> levels;
  double bin_width = 0.0;

  std::map<long long, SurrogateBin> bins() const {
    std::map<long long, SurrogateBin> out;
    for (const auto& l : levels) {
      auto& b = out[std::llround(l.alpha / bin_width)];
      if (l.value > b.value) b = {l.alpha, l.value};
    }
    return out;
  }

  // T^alpha for the bin containing alpha; -infinity for an empty bin.
  double at_alpha(double alpha) const {
    const auto all = bins();
    auto it = all.find(std::llround(alpha / bin_width));
    return it == all.end() ? -std::numeric_limits<double>::infinity() : it->second.value;
  }

  // max over levels of alpha d + sqrt(d) T.
  double combined(double d) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& l : levels) best = std::max(best, l.alpha * d + std::sqrt(d) * l.value);
    return best;
  }

  double unconstrained() const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& l : levels) best = std::max(best, l.value);
    return best;
  }
};

struct SurrogateOptions {
  SolverSpec solver{};
  double bin_width = 0.0;  // 0: 2/n^2 for p = 2, n^-p otherwise
  std::uint64_t seed = 0;  // annealing streams
};

namespace detail {

inline void for_each_composition(std::size_t n, unsigned q, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> c(q, 0);
  auto rec = [&](auto&& self, unsigned pos, std::size_t left) -> void {
    if (pos + 1 == q) {
      c[pos] = left;
      fn(c);
      return;
    }
    for (std::size_t k = 0; k <= left; ++k) {
      c[pos] = k;
      self(self, pos + 1, left - k);
    }
  };
  rec(rec, 0, n);
}

inline std::uint64_t count_key(std::span<const std::size_t> counts, std::size_t n) {
  std::uint64_t key = 0;
  for (auto c : counts) key = key * (n + 1) + c;
  return key;
}

// Per-count-class maxima of `objective(spins, counts)` over all of X^n.
template <class Objective>
std::vector<SurrogateLevel> exhaustive_levels(const Problem& pr, const Kernel& kernel, bool unrestricted,
                                              double budget, Objective&& objective) {
  const Vertex n = pr.n();
  const unsigned q = pr.q();
  std::map<std::uint64_t, std::size_t> slot;
  std::vector<SurrogateLevel> levels;
  for_each_composition(n, q, [&](const std::vector<std::size_t>& c) {
    slot[count_key(c, n)] = levels.size();
    levels.push_back({c, alpha_of_counts(kernel, c, unrestricted), -std::numeric_limits<double>::infinity(), {}});
  });
  std::vector<std::size_t> counts(q);
  gray_walk(pr, ConstraintSet::all(), budget, [&](std::span<const Spin> s, double) {
    std::fill(counts.begin(), counts.end(), 0);
    for (Spin x : s) ++counts[x];
    auto& lvl = levels[slot[count_key(counts, n)]];
    const double v = objective(s, counts) / n;
    if (v > lvl.value || (v == lvl.value && lex_less(s, lvl.argmax.spins))) {
      lvl.value = v;
      lvl.argmax = SpinConfig(std::vector<Spin>(s.begin(), s.end()), q);
    }
  });
  return levels;
}

}  // namespace detail

inline double default_bin_width(Vertex n, unsigned p) {
  return p == 2 ? 2.0 / (static_cast<double>(n) * n) : std::pow(static_cast<double>(n), -static_cast<double>(p));
}

// T_n^alpha for every type-count class. Exact enumeration when A_n fits the
// budget, otherwise one annealing run per class under fixed type counts.
inline SurrogateTable surrogate_T(const GaussianTensor& j, const Kernel& kernel, const SurrogateOptions& opt = {}) {
  const Problem pr = gaussian_problem(j, kernel);
  const Vertex n = j.n();
  const bool unr = j.unrestricted();
  SurrogateTable table;
  table.bin_width = opt.bin_width > 0 ? opt.bin_width : default_bin_width(n, kernel.p());
  const double space = std::pow(static_cast<double>(kernel.q()), static_cast<double>(n));
  const bool exact = opt.solver.kind == SolverKind::exact ||
                     (opt.solver.kind == SolverKind::automatic && space <= opt.solver.budget);
  if (exact) {
    table.levels = detail::exhaustive_levels(pr, kernel, unr, opt.solver.budget,
                                             [&](std::span<const Spin> s, const std::vector<std::size_t>&) {
                                               return pr.evaluate(s);
                                             });
    return table;
  }
  Rng rng(opt.seed, 0x7a11);
  detail::for_each_composition(n, kernel.q(), [&](const std::vector<std::size_t>& c) {
    SurrogateLevel lvl{c, alpha_of_counts(kernel, c, unr), 0.0, {}};
    SolverSpec spec = opt.solver;
    if (spec.kind == SolverKind::automatic || spec.kind == SolverKind::exact) spec.kind = SolverKind::anneal;
    const SolveResult r = solve(pr, ConstraintSet::fixed_type_counts(c), spec, rng);
    lvl.value = r.value / n;
    lvl.argmax = r.config;
    table.levels.push_back(std::move(lvl));
  });
  return table;
}

// G_i = sum over (m_2..m_p) of J_{i m_2..m_p} / n^((p-1)/2), over the same index
// range (distinct or all) as the tensor.
inline std::vector<double> surrogate_g(const GaussianTensor& j) {
  std::vector<double> g(j.n(), 0.0);
  const double scale = 1.0 / std::pow(static_cast<double>(j.n()), (j.p() - 1) / 2.0);
  j.for_each([&](std::span<const Vertex> t, double v) {
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (k > 0 && t[k] == t[k - 1]) continue;
      Tuple rest(t.begin(), t.end());
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
      g[t[k]] += static_cast<double>(orderings(rest)) * v * scale;
    }
  });
  return g;
}

// S_n^alpha: the T objective minus (p/n^(p-1)) sum G_i1 f(sigma_i1..sigma_ip),
// by exhaustive enumeration.
inline SurrogateTable surrogate_S(const GaussianTensor& j, const Kernel& kernel, const SurrogateOptions& opt = {}) {
  const Problem pr = gaussian_problem(j, kernel);
  const Vertex n = j.n();
  const unsigned p = kernel.p();
  const unsigned q = kernel.q();
  const bool unr = j.unrestricted();
  const auto g = surrogate_g(j);
  const double weight = p / std::pow(static_cast<double>(n), static_cast<double>(p - 1));
  SurrogateTable table;
  table.bin_width = opt.bin_width > 0 ? opt.bin_width : default_bin_width(n, p);
  std::vector<double> row(q);
  std::vector<std::size_t> cached;
  table.levels = detail::exhaustive_levels(
      pr, kernel, unr, opt.solver.budget, [&](std::span<const Spin> s, const std::vector<std::size_t>& counts) {
        if (counts != cached) {
          // L(x) = sum over the remaining p-1 indices of f(x, ...), given sigma_i1 = x.
          for (unsigned x = 0; x < q; ++x) {
            std::vector<std::size_t> c = counts;
            if (!unr) {
              if (c[x] == 0) {
                row[x] = 0.0;
                continue;
              }
              --c[x];
            }
            const Spin pin[1] = {static_cast<Spin>(x)};
            row[x] = kernel_count_sum(kernel, c, unr, pin);
          }
          cached = counts;
        }
        double correction = 0.0;
        for (Vertex i = 0; i < n; ++i) correction += g[i] * row[s[i]];
        return pr.evaluate(s) - weight * correction;
      });
  return table;
}

// ---------------------------------------------------------------------------
// Monte Carlo ground states

struct MonteCarloEstimate {
  double mean = 0.0;
  double sem = 0.0;
  std::vector<double> values;  // per replica, in replica order
};

inline MonteCarloEstimate summarize_replicas(std::vector<double> values) {
  const auto r = stats::summarize(values);
  return {r.mean(), r.sem(), std::move(values)};
}

inline SolveResult solve_ising(const IsingModel& m, const ConstraintSet& cs, const SolverSpec& spec, Rng& rng) {
  SolverKind kind = spec.kind;
  if (kind == SolverKind::automatic)
    kind = (m.n() <= 24 && cs.cardinality(m.n(), 2) <= spec.budget) ? SolverKind::exact : SolverKind::anneal_ising;
  if (kind == SolverKind::exact) return exact_ising_max(m, cs, spec.budget);
  return anneal_ising(m, cs, spec.schedule, rng);
}

// H'(sigma) = sum over all n^p index tuples of G sigma_i1..sigma_ip / n^((p-1)/2),
// G i.i.d. N(0,1), reduced to an Ising energy with s^2 = 1.
inline IsingModel pspin_model(Vertex n, unsigned p, Rng& rng) {
  if (p < 2 || p > 3) throw std::invalid_argument("pspin_model supports p = 2, 3");
  if (n < p) throw std::invalid_argument("pspin_model needs n >= p");
  IsingModel m(n, p);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double scale = 1.0 / std::pow(static_cast<double>(n), (p - 1) / 2.0);
  for_each_multiset(n, p, [&](std::span<const Vertex> t) {
    // The ordered copies of one multiset sum to N(0, #orderings).
    const double c = std::sqrt(static_cast<double>(orderings(t))) * gauss(rng);
    m.add_product(t, c * scale);
  });
  return m;
}

// (1/n) E max_sigma H'(sigma) over disorder replicas. Replica r draws its
// disorder from stream (seed, r, 0) and its solver randomness from (seed, r, 1).
inline MonteCarloEstimate pspin_ground_state(Vertex n, unsigned p, const SolverSpec& spec, std::size_t replicas,
                                             std::uint64_t seed) {
  if (replicas < 2) throw std::invalid_argument("pspin_ground_state needs at least two replicas");
  std::vector<double> values(replicas);
  parallel_for(replicas, [&](std::size_t r) {
    Rng disorder(derive_seed(seed, r, 0));
    Rng solver(derive_seed(seed, r, 1));
    const IsingModel m = pspin_model(n, p, disorder);
    values[r] = solve_ising(m, ConstraintSet::all(), spec, solver).value / n;
  });
  return summarize_replicas(std::move(values));
}

// (xi/n) <v, sigma>^2 + sum_{i,j} J_ij sigma_i sigma_j / sqrt(n) with J GOE and
// v the planted +-1 vector (first half +1). Over balanced sigma this is the
// min-bisection surrogate; by the gauge sigma_i -> v_i sigma_i it has the law of
// the <1, sigma> form over configurations with equal half sums.
inline IsingModel sbm_model(Vertex n, double xi, Rng& rng) {
  const GoeMatrix j = gen_goe(n, rng);
  IsingModel m(n, 2);
  const double root = std::sqrt(static_cast<double>(n));
  auto v = [&](Vertex i) { return i < n / 2 ? 1.0 : -1.0; };
  double diag = 0.0;
  for (Vertex i = 0; i < n; ++i) diag += j(i, i);
  const Vertex none[1] = {0};
  m.add_monomial(std::span<const Vertex>(none, 0), xi + diag / root);
  for (Vertex i = 0; i < n; ++i)
    for (Vertex k = i + 1; k < n; ++k) {
      const Vertex pair[2] = {i, k};
      m.add_monomial(pair, 2.0 * xi * v(i) * v(k) / n + 2.0 * j(i, k) / root);
    }
  return m;
}

inline MonteCarloEstimate sbm_surrogate(Vertex n, double xi, bool balanced, const SolverSpec& spec,
                                        std::size_t replicas, std::uint64_t seed) {
  if (replicas < 2) throw std::invalid_argument("sbm_surrogate needs at least two replicas");
  if (balanced && n % 2 != 0) throw std::invalid_argument("balanced surrogate needs even n");
  const ConstraintSet cs = balanced ? ConstraintSet::balanced_bisection() : ConstraintSet::all();
  std::vector<double> values(replicas);
  parallel_for(replicas, [&](std::size_t r) {
    Rng disorder(derive_seed(seed, r, 0));
    Rng solver(derive_seed(seed, r, 1));
    const IsingModel m = sbm_model(n, xi, disorder);
    values[r] = solve_ising(m, cs, spec, solver).value / n;
  });
  return summarize_replicas(std::move(values));
}

struct GroundStateScan {
  std::vector<double> n;
  std::vector<MonteCarloEstimate> estimates;
  stats::Extrapolation extrapolated;
};

// Ground-state density on an n-grid with the e_inf + b n^(-2/3) fit.
inline GroundStateScan pspin_extrapolate(std::span<const Vertex> grid, unsigned p, const SolverSpec& spec,
                                         std::size_t replicas, std::uint64_t seed) {
  GroundStateScan out;
  std::vector<double> means, sems;
  for (Vertex n : grid) {
    out.n.push_back(n);
    out.estimates.push_back(pspin_ground_state(n, p, spec, replicas, derive_seed(seed, n)));
    means.push_back(out.estimates.back().mean);
    sems.push_back(out.estimates.back().sem);
  }
  out.extrapolated = stats::extrapolate_n23(out.n, means, sems);
  return out;
}

}  // namespace hyperglass
