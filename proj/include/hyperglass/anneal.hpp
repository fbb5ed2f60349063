#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <map>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "hyperglass/enumerate.hpp"
#include "hyperglass/problem.hpp"
#include "hyperglass/rng.hpp"

namespace hyperglass {

// Geometric inverse-temperature ramp with Metropolis acceptance.
struct Schedule {
  double beta_min = 0.1;
  double beta_max = 20.0;
  std::uint64_t sweeps = 20000;
  unsigned restarts = 8;

  double beta_at(std::uint64_t sweep) const {
    if (sweeps <= 1) return beta_max;
    const double t = static_cast<double>(sweep) / static_cast<double>(sweeps - 1);
    return beta_min * std::pow(beta_max / beta_min, t);
  }
};

namespace detail {

inline std::vector<Spin> random_config(Vertex n, unsigned q, const std::vector<std::size_t>& counts, Rng& rng) {
  std::vector<Spin> s(n);
  if (counts.empty()) {
    std::uniform_int_distribution<unsigned> label(0, q - 1);
    for (auto& x : s) x = static_cast<Spin>(label(rng));
    return s;
  }
  std::size_t pos = 0;
  for (unsigned k = 0; k < q; ++k)
    for (std::size_t c = 0; c < counts[k]; ++c) s[pos++] = static_cast<Spin>(k);
  std::shuffle(s.begin(), s.end(), rng);
  return s;
}

inline bool metropolis(double delta, double beta, Rng& rng) {
  return delta >= 0.0 || rng.uniform() < std::exp(beta * delta);
}

inline void check_feasible(const ConstraintSet& cs, Vertex n, unsigned q) {
  if (cs.cardinality(n, q) == 0.0) throw EmptyConstraintSet();
}

}  // namespace detail

// Simulated annealing on a term-list problem. Unconstrained runs use
// single-site relabelling; constrained runs swap the labels of two sites.
inline SolveResult anneal_max(const Problem& pr, const ConstraintSet& cs, const Schedule& sched, Rng& rng) {
  const Vertex n = pr.n();
  const unsigned q = pr.q();
  detail::check_feasible(cs, n, q);
  const auto counts = cs.required_counts(n, q);
  const bool swaps = !counts.empty();

  SolveResult out;
  out.method = "anneal";
  out.sweeps = sched.sweeps;
  out.restarts = sched.restarts;
  out.beta_min = sched.beta_min;
  out.beta_max = sched.beta_max;
  if (n == 0) {
    out.value = pr.evaluate(std::vector<Spin>{});
    out.config = SpinConfig({}, q);
    return out;
  }

  std::uniform_int_distribution<Vertex> site(0, n - 1);
  std::uniform_int_distribution<unsigned> shift(1, std::max(1u, q - 1));
  std::vector<Spin> best_overall;
  double best_overall_value = -std::numeric_limits<double>::infinity();

  for (unsigned r = 0; r < std::max(1u, sched.restarts); ++r) {
    Rng local(rng.next_u64(), r);
    std::vector<Spin> s = detail::random_config(n, q, counts, local);
    double h = pr.evaluate(s);
    std::vector<Spin> best = s;
    double best_h = h;
    const bool movable = swaps ? std::count(counts.begin(), counts.end(), std::size_t{0}) < static_cast<long>(q) - 1
                               : q > 1;
    for (std::uint64_t sweep = 0; movable && sweep < sched.sweeps; ++sweep) {
      const double beta = sched.beta_at(sweep);
      for (Vertex step = 0; step < n; ++step) {
        if (!swaps) {
          const Vertex v = site(local);
          const Spin x = static_cast<Spin>((s[v] + shift(local)) % q);
          const double d = pr.delta(s, v, x);
          if (detail::metropolis(d, beta, local)) {
            s[v] = x;
            h += d;
          }
        } else {
          const Vertex i = site(local);
          Vertex j = site(local);
          while (s[j] == s[i]) j = site(local);
          const Spin si = s[i];
          const Spin sj = s[j];
          const double d1 = pr.delta(s, i, sj);
          s[i] = sj;
          const double d2 = pr.delta(s, j, si);
          if (detail::metropolis(d1 + d2, beta, local)) {
            s[j] = si;
            h += d1 + d2;
          } else {
            s[i] = si;
          }
        }
        if (h > best_h) {
          best_h = h;
          best = s;
        }
      }
      if ((sweep & 255u) == 255u) h = pr.evaluate(s);
    }
    const double exact = pr.evaluate(best);
    if (exact > best_overall_value || (exact == best_overall_value && lex_less(best, best_overall))) {
      best_overall_value = exact;
      best_overall = best;
    }
  }
  out.value = best_overall_value;
  out.config = SpinConfig(std::move(best_overall), q);
  return out;
}

namespace detail {

// Multilinear (Walsh) expansion of each term of a q = 2 problem in the spins
// s = +-1 of its distinct sites; emit(sites, coefficient) per non-zero monomial.
template <class Emit>
void expand_multilinear(const Problem& pr, Emit&& emit) {
  std::vector<Spin> scratch(pr.n(), 0);
  std::vector<double> values;
  for (const auto& t : pr.terms()) {
    Tuple sites = t.vertices;
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    const std::size_t r = sites.size();
    if (r > 16) throw std::invalid_argument("term too long to expand");
    values.assign(std::size_t{1} << r, 0.0);
    for (std::size_t mask = 0; mask < values.size(); ++mask) {
      for (std::size_t b = 0; b < r; ++b) scratch[sites[b]] = static_cast<Spin>((mask >> b) & 1u);
      values[mask] = pr.term_value(t, scratch);
    }
    for (std::size_t b = 0; b < r; ++b) scratch[sites[b]] = 0;
    // In-place fast Walsh-Hadamard transform; label 1 is spin -1.
    for (std::size_t len = 1; len < values.size(); len <<= 1)
      for (std::size_t i = 0; i < values.size(); i += len << 1)
        for (std::size_t j = i; j < i + len; ++j) {
          const double a = values[j];
          const double b = values[j + len];
          values[j] = a + b;
          values[j + len] = a - b;
        }
    Tuple chosen;
    for (std::size_t subset = 0; subset < values.size(); ++subset) {
      const double coef = values[subset] / static_cast<double>(values.size());
      if (coef == 0.0) continue;
      chosen.clear();
      for (std::size_t b = 0; b < r; ++b)
        if ((subset >> b) & 1u) chosen.push_back(sites[b]);
      emit(std::span<const Vertex>(chosen), coef);
    }
  }
}

}  // namespace detail

// Energy E(s) = c + sum h_i s_i + sum_{i<j} W_ij s_i s_j + sum_{i<j<k} T_ijk s_i s_j s_k
// over s in {+1,-1}^n, with dense symmetric storage (T zero on repeated indices).
class IsingModel {
 public:
  explicit IsingModel(Vertex n, unsigned order)
      : n_(n), order_(order), h_(n, 0.0), w_(static_cast<std::size_t>(n) * n, 0.0) {
    if (order < 1 || order > 3) throw std::invalid_argument("IsingModel supports interaction order 1..3");
    if (order == 3) t_.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  }

  Vertex n() const noexcept { return n_; }
  unsigned order() const noexcept { return order_; }
  double constant() const noexcept { return c_; }
  double field(Vertex i) const noexcept { return h_[i]; }
  double coupling(Vertex i, Vertex j) const noexcept { return w_[idx(i, j)]; }
  double triple(Vertex i, Vertex j, Vertex k) const noexcept { return t_.empty() ? 0.0 : t_[idx(i, j, k)]; }

  // Adds a monomial over distinct sites (any order, 0..3 of them).
  void add_monomial(std::span<const Vertex> sites, double c) {
    switch (sites.size()) {
      case 0: c_ += c; break;
      case 1: h_[sites[0]] += c; break;
      case 2:
        if (sites[0] == sites[1]) throw std::invalid_argument("monomial sites must be distinct");
        w_[idx(sites[0], sites[1])] += c;
        w_[idx(sites[1], sites[0])] += c;
        break;
      case 3: {
        if (order_ < 3) throw std::invalid_argument("cubic monomial in a quadratic model");
        const Vertex a = sites[0], b = sites[1], d = sites[2];
        if (a == b || b == d || a == d) throw std::invalid_argument("monomial sites must be distinct");
        for (auto [x, y, z] : {std::array{a, b, d}, std::array{a, d, b}, std::array{b, a, d}, std::array{b, d, a},
                               std::array{d, a, b}, std::array{d, b, a}})
          t_[idx(x, y, z)] += c;
        break;
      }
      default: throw std::invalid_argument("monomial order above 3");
    }
  }

  // Adds the product of a sorted (possibly repeating) vertex list, reducing s^2 = 1.
  void add_product(std::span<const Vertex> sorted, double c) {
    Vertex odd[3];
    std::size_t k = 0;
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      if ((j - i) % 2 == 1) {
        if (k == 3) throw std::invalid_argument("product reduces to order above 3");
        odd[k++] = sorted[i];
      }
      i = j;
    }
    add_monomial(std::span<const Vertex>(odd, k), c);
  }

  // Multilinear expansion of a q = 2 term-list problem with term arity <= 3.
  static IsingModel from_problem(const Problem& pr) {
    if (pr.q() != 2) throw std::invalid_argument("IsingModel needs q = 2");
    const auto arity = pr.max_term_arity();
    if (arity > 3) throw std::invalid_argument("IsingModel supports term arity <= 3");
    IsingModel m(pr.n(), std::max<unsigned>(2, static_cast<unsigned>(arity)));
    m.c_ = pr.offset();
    detail::expand_multilinear(pr, [&](std::span<const Vertex> sites, double coef) { m.add_monomial(sites, coef); });
    return m;
  }

  double energy(std::span<const int> s) const {
    double e = c_;
    for (Vertex i = 0; i < n_; ++i) {
      double acc = h_[i];
      for (Vertex j = i + 1; j < n_; ++j) {
        double pair = w_[idx(i, j)];
        if (!t_.empty()) {
          const double* row = &t_[idx(i, j, 0)];
          for (Vertex k = j + 1; k < n_; ++k) pair += row[k] * s[k];
        }
        acc += pair * s[j];
      }
      e += acc * s[i];
    }
    return e;
  }

  // F_i = dE/ds_i.
  std::vector<double> fields(std::span<const int> s) const {
    std::vector<double> f(n_);
    for (Vertex i = 0; i < n_; ++i) {
      double acc = h_[i];
      for (Vertex j = 0; j < n_; ++j) {
        double pair = w_[idx(i, j)];
        if (!t_.empty()) {
          const double* row = &t_[idx(i, j, 0)];
          double cubic = 0.0;
          for (Vertex k = j + 1; k < n_; ++k) cubic += row[k] * s[k];
          pair += cubic;
        }
        acc += pair * s[j];
      }
      f[i] = acc;
    }
    return f;
  }

  // d^2E / ds_i ds_j at s.
  double mixed(std::span<const int> s, Vertex i, Vertex j) const {
    double m = w_[idx(i, j)];
    if (!t_.empty()) {
      const double* row = &t_[idx(i, j, 0)];
      for (Vertex k = 0; k < n_; ++k) m += row[k] * s[k];
    }
    return m;
  }

  // Field update after s_i changed by `change`.
  void propagate(std::span<const int> s, Vertex i, double change, std::vector<double>& f) const {
    const double* wrow = &w_[idx(i, 0)];
    if (t_.empty()) {
      for (Vertex j = 0; j < n_; ++j) f[j] += change * wrow[j];
      return;
    }
    for (Vertex j = 0; j < n_; ++j) {
      const double* row = &t_[idx(i, j, 0)];
      double m = wrow[j];
      for (Vertex k = 0; k < n_; ++k) m += row[k] * s[k];
      f[j] += change * m;
    }
  }

 private:
  std::size_t idx(Vertex i, Vertex j) const noexcept { return static_cast<std::size_t>(i) * n_ + j; }
  std::size_t idx(Vertex i, Vertex j, Vertex k) const noexcept {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }

  Vertex n_;
  unsigned order_;
  double c_ = 0.0;
  std::vector<double> h_;
  std::vector<double> w_;
  std::vector<double> t_;
};

// Annealing with maintained local fields. Unconstrained: single flips.
// balanced_bisection: flips of an opposite-sign pair. Returns E of the best
// state evaluated from scratch, with spins encoded as labels (+1 -> 0).
inline SolveResult anneal_ising(const IsingModel& model, const ConstraintSet& cs, const Schedule& sched, Rng& rng) {
  const Vertex n = model.n();
  detail::check_feasible(cs, n, 2);
  const auto counts = cs.required_counts(n, 2);
  const bool pairs = !counts.empty();

  SolveResult out;
  out.method = "anneal_ising";
  out.sweeps = sched.sweeps;
  out.restarts = sched.restarts;
  out.beta_min = sched.beta_min;
  out.beta_max = sched.beta_max;

  std::uniform_int_distribution<Vertex> site(0, n == 0 ? 0 : n - 1);
  std::vector<int> best_overall;
  double best_overall_value = -std::numeric_limits<double>::infinity();
  for (unsigned r = 0; r < std::max(1u, sched.restarts); ++r) {
    Rng local(rng.next_u64(), r);
    const auto labels = detail::random_config(n, 2, counts, local);
    std::vector<int> s(n);
    for (Vertex i = 0; i < n; ++i) s[i] = spin_sign(labels[i]);
    std::vector<double> f = model.fields(s);
    double e = model.energy(s);
    double best_e = e;
    std::vector<int> best = s;
    const bool movable = n > 0 && (!pairs || (counts[0] > 0 && counts[1] > 0));
    for (std::uint64_t sweep = 0; movable && sweep < sched.sweeps; ++sweep) {
      const double beta = sched.beta_at(sweep);
      for (Vertex step = 0; step < n; ++step) {
        if (!pairs) {
          const Vertex i = site(local);
          const double d = -2.0 * s[i] * f[i];
          if (detail::metropolis(d, beta, local)) {
            const double change = -2.0 * s[i];
            s[i] = -s[i];
            model.propagate(s, i, change, f);
            e += d;
          }
        } else {
          const Vertex i = site(local);
          Vertex j = site(local);
          while (s[j] == s[i]) j = site(local);
          const double d = -2.0 * s[i] * f[i] - 2.0 * s[j] * f[j] + 4.0 * s[i] * s[j] * model.mixed(s, i, j);
          if (detail::metropolis(d, beta, local)) {
            const double ci = -2.0 * s[i];
            s[i] = -s[i];
            model.propagate(s, i, ci, f);
            const double cj = -2.0 * s[j];
            s[j] = -s[j];
            model.propagate(s, j, cj, f);
            e += d;
          }
        }
        if (e > best_e) {
          best_e = e;
          best = s;
        }
      }
    }
    const double exact = model.energy(best);
    std::vector<Spin> lab(n);
    for (Vertex i = 0; i < n; ++i) lab[i] = spin_from_sign(best[i]);
    std::vector<Spin> prev(best_overall.size());
    for (std::size_t i = 0; i < prev.size(); ++i) prev[i] = spin_from_sign(best_overall[i]);
    if (exact > best_overall_value || (exact == best_overall_value && lex_less(lab, prev))) {
      best_overall_value = exact;
      best_overall = best;
    }
  }
  std::vector<Spin> lab(n);
  for (Vertex i = 0; i < n; ++i) lab[i] = spin_from_sign(best_overall[i]);
  out.value = best_overall_value;
  out.config = SpinConfig(std::move(lab), 2);
  return out;
}

// Sparse Ising energy: a list of monomials c_m prod_{i in m} s_i over distinct sites.
class SparseIsing {
 public:
  static SparseIsing from_problem(const Problem& pr) {
    if (pr.q() != 2) throw std::invalid_argument("SparseIsing needs q = 2");
    SparseIsing m;
    m.n_ = pr.n();
    m.constant_ = pr.offset();
    std::map<Tuple, double> merged;
    detail::expand_multilinear(pr, [&](std::span<const Vertex> sites, double coef) {
      if (sites.empty()) {
        m.constant_ += coef;
      } else {
        merged[Tuple(sites.begin(), sites.end())] += coef;
      }
    });
    m.incidence_.assign(m.n_, {});
    for (auto& [sites, coef] : merged) {
      if (coef == 0.0) continue;
      const auto id = static_cast<std::uint32_t>(m.coef_.size());
      for (Vertex v : sites) m.incidence_[v].push_back(id);
      m.sites_.push_back(sites);
      m.coef_.push_back(coef);
    }
    return m;
  }

  Vertex n() const noexcept { return n_; }
  std::size_t size() const noexcept { return coef_.size(); }

  double energy(std::span<const int> s) const {
    double e = constant_;
    for (std::size_t m = 0; m < coef_.size(); ++m) e += monomial(m, s);
    return e;
  }

  double monomial(std::size_t m, std::span<const int> s) const {
    double v = coef_[m];
    for (Vertex i : sites_[m]) v *= s[i];
    return v;
  }

  const std::vector<std::uint32_t>& incident(Vertex v) const noexcept { return incidence_[v]; }

 private:
  Vertex n_ = 0;
  double constant_ = 0.0;
  std::vector<Tuple> sites_;
  std::vector<double> coef_;
  std::vector<std::vector<std::uint32_t>> incidence_;
};

// Annealing on a sparse Ising energy with cached monomial values: a flip of
// site i changes E by -2 times the sum of its incident monomials.
inline SolveResult anneal_sparse_ising(const SparseIsing& model, const ConstraintSet& cs, const Schedule& sched,
                                       Rng& rng) {
  const Vertex n = model.n();
  detail::check_feasible(cs, n, 2);
  const auto counts = cs.required_counts(n, 2);
  const bool pairs = !counts.empty();

  SolveResult out;
  out.method = "anneal_sparse_ising";
  out.sweeps = sched.sweeps;
  out.restarts = sched.restarts;
  out.beta_min = sched.beta_min;
  out.beta_max = sched.beta_max;

  std::uniform_int_distribution<Vertex> site(0, n == 0 ? 0 : n - 1);
  std::vector<int> best_overall;
  double best_overall_value = -std::numeric_limits<double>::infinity();
  std::vector<double> val(model.size());
  auto local_sum = [&](Vertex i) {
    double acc = 0.0;
    for (auto m : model.incident(i)) acc += val[m];
    return acc;
  };
  auto flip = [&](std::vector<int>& s, Vertex i) {
    s[i] = -s[i];
    for (auto m : model.incident(i)) val[m] = -val[m];
  };
  for (unsigned r = 0; r < std::max(1u, sched.restarts); ++r) {
    Rng local(rng.next_u64(), r);
    const auto labels = detail::random_config(n, 2, counts, local);
    std::vector<int> s(n);
    for (Vertex i = 0; i < n; ++i) s[i] = spin_sign(labels[i]);
    for (std::size_t m = 0; m < val.size(); ++m) val[m] = model.monomial(m, s);
    double e = model.energy(s);
    double best_e = e;
    std::vector<int> best = s;
    const bool movable = n > 0 && (!pairs || (counts[0] > 0 && counts[1] > 0));
    for (std::uint64_t sweep = 0; movable && sweep < sched.sweeps; ++sweep) {
      const double beta = sched.beta_at(sweep);
      for (Vertex step = 0; step < n; ++step) {
        if (!pairs) {
          const Vertex i = site(local);
          const double d = -2.0 * local_sum(i);
          if (detail::metropolis(d, beta, local)) {
            flip(s, i);
            e += d;
          }
        } else {
          const Vertex i = site(local);
          Vertex j = site(local);
          while (s[j] == s[i]) j = site(local);
          const double d1 = -2.0 * local_sum(i);
          flip(s, i);
          const double d2 = -2.0 * local_sum(j);
          if (detail::metropolis(d1 + d2, beta, local)) {
            flip(s, j);
            e += d1 + d2;
          } else {
            flip(s, i);
          }
        }
        if (e > best_e) {
          best_e = e;
          best = s;
        }
      }
    }
    const double exact = model.energy(best);
    std::vector<Spin> lab(n), prev(best_overall.size());
    for (Vertex i = 0; i < n; ++i) lab[i] = spin_from_sign(best[i]);
    for (std::size_t i = 0; i < prev.size(); ++i) prev[i] = spin_from_sign(best_overall[i]);
    if (exact > best_overall_value || (exact == best_overall_value && lex_less(lab, prev))) {
      best_overall_value = exact;
      best_overall = best;
    }
  }
  std::vector<Spin> lab(n);
  for (Vertex i = 0; i < n; ++i) lab[i] = spin_from_sign(best_overall[i]);
  out.value = best_overall_value;
  out.config = SpinConfig(std::move(lab), 2);
  return out;
}

// Exhaustive maximum of an Ising energy over {+1,-1}^n (or the balanced
// half), by single flips along a binary Gray code with maintained fields.
inline SolveResult exact_ising_max(const IsingModel& model, const ConstraintSet& cs,
                                   double budget = kDefaultEnumerationBudget) {
  const Vertex n = model.n();
  const double size = cs.cardinality(n, 2);
  if (size == 0.0) throw EmptyConstraintSet();
  if (size > budget || n > 40 || std::ldexp(1.0, static_cast<int>(n)) > 64.0 * budget) throw BudgetExceeded(size);
  const auto counts = cs.required_counts(n, 2);
  std::vector<int> s(n, 1);
  std::size_t minus = 0;
  std::vector<double> f = model.fields(s);
  double e = model.energy(s);
  double scale = 1.0;
  for (double x : f) scale += std::abs(x);
  const double tol = 1e-9 * scale * std::max<double>(1.0, n);
  double best_running = -std::numeric_limits<double>::infinity();
  double best = best_running;
  std::vector<Spin> arg;
  std::vector<Spin> lab(n);
  auto consider = [&] {
    if (!counts.empty() && minus != counts[1]) return;
    if (e < best_running - tol) return;
    best_running = std::max(best_running, e);
    const double exact = model.energy(s);
    for (Vertex i = 0; i < n; ++i) lab[i] = spin_from_sign(s[i]);
    if (exact > best || (exact == best && lex_less(lab, arg))) {
      best = exact;
      arg = lab;
    }
  };
  consider();
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const Vertex v = n - 1 - static_cast<Vertex>(std::countr_zero(k));
    e += -2.0 * s[v] * f[v];
    const double change = -2.0 * s[v];
    minus += s[v] > 0 ? 1 : std::size_t(-1);
    s[v] = -s[v];
    model.propagate(s, v, change, f);
    if ((k & 4095u) == 0) {
      e = model.energy(s);
      f = model.fields(s);
    }
    consider();
  }
  SolveResult out;
  out.value = best;
  out.config = SpinConfig(std::move(arg), 2);
  out.method = "exact_ising";
  out.enumerated = static_cast<std::uint64_t>(size);
  return out;
}

enum class SolverKind { automatic, exact, anneal, anneal_ising, anneal_sparse_ising };

struct SolverSpec {
  SolverKind kind = SolverKind::automatic;
  Schedule schedule{};
  double budget = kDefaultEnumerationBudget;
};

// Resolution of `automatic`: exact enumeration when A_n fits the budget; for
// q = 2 the dense field annealer when the problem is dense with arity <= 3 and
// the sparse monomial annealer otherwise; term-list annealing for q > 2.
inline SolverKind resolve_solver(const Problem& pr, const ConstraintSet& cs, const SolverSpec& spec) {
  if (spec.kind != SolverKind::automatic) return spec.kind;
  if (pr.n() <= 20 && cs.cardinality(pr.n(), pr.q()) <= spec.budget &&
      std::pow(static_cast<double>(pr.q()), static_cast<double>(pr.n())) <= 64.0 * spec.budget)
    return SolverKind::exact;
  if (pr.q() != 2) return SolverKind::anneal;
  const auto arity = pr.max_term_arity();
  const bool dense = arity >= 2 && arity <= 3 && pr.n() <= 2048 &&
                     static_cast<double>(pr.terms().size()) >= 0.25 * binomial_real(pr.n(), static_cast<unsigned>(arity));
  return dense ? SolverKind::anneal_ising : SolverKind::anneal_sparse_ising;
}

inline SolveResult solve(const Problem& pr, const ConstraintSet& cs, const SolverSpec& spec, Rng& rng) {
  SolveResult r;
  switch (resolve_solver(pr, cs, spec)) {
    case SolverKind::exact: return exact_max(pr, cs, spec.budget);
    case SolverKind::anneal_ising: r = anneal_ising(IsingModel::from_problem(pr), cs, spec.schedule, rng); break;
    case SolverKind::anneal_sparse_ising:
      r = anneal_sparse_ising(SparseIsing::from_problem(pr), cs, spec.schedule, rng);
      break;
    case SolverKind::anneal:
    case SolverKind::automatic: return anneal_max(pr, cs, spec.schedule, rng);
  }
  // Report the term-list objective of the returned configuration.
  r.value = pr.evaluate(r.config);
  return r;
}

}  // namespace hyperglass
