#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperglass/combinatorics.hpp"
#include "hyperglass/objectives.hpp"
#include "hyperglass/problem.hpp"

namespace hyperglass {

inline constexpr double kDefaultEnumerationBudget = 33554432.0;  // 2^25

struct SolveResult {
  double value = -std::numeric_limits<double>::infinity();
  SpinConfig config;
  std::string method;
  std::uint64_t enumerated = 0;
  std::uint64_t sweeps = 0;
  unsigned restarts = 0;
  double beta_min = 0.0;
  double beta_max = 0.0;
};

// Thrown when A_n has no element; the maximum is then -infinity by convention.
struct EmptyConstraintSet : std::domain_error {
  EmptyConstraintSet() : std::domain_error("constraint set is empty (maximum is -infinity)") {}
};

struct BudgetExceeded : std::length_error {
  explicit BudgetExceeded(double size)
      : std::length_error("constraint set has " + std::to_string(size) +
                          " configurations, beyond the enumeration budget; use anneal_max instead") {}
};

namespace detail {

// Walks every configuration of A_n along a reflected q-ary Gray code,
// calling visit(spins, h) with h the incrementally updated objective.
// The running value is resynchronised against a full evaluation every 4096
// steps, so its drift stays below 4096 rounding errors of |H|.
template <class Visit>
std::uint64_t gray_walk(const Problem& pr, const ConstraintSet& cs, double budget, Visit&& visit) {
  const Vertex n = pr.n();
  const unsigned q = pr.q();
  const double size = cs.cardinality(n, q);
  if (size == 0.0) throw EmptyConstraintSet();
  if (size > budget) throw BudgetExceeded(size);
  const double walk = std::pow(static_cast<double>(q), static_cast<double>(n));
  if (walk > 64.0 * budget) throw BudgetExceeded(walk);

  const auto required = cs.required_counts(n, q);
  const bool filtered = !required.empty();
  std::vector<std::size_t> counts(q, 0);
  counts[0] = n;

  std::vector<Spin> spins(n, 0);
  std::vector<int> dir(n, 1);
  double h = pr.evaluate(spins);
  std::uint64_t visited = 0;
  auto emit = [&] {
    if (!filtered || counts == required) {
      visit(std::span<const Spin>(spins), h);
      ++visited;
    }
  };
  emit();
  if (q == 1 || n == 0) return visited;

  const auto total = static_cast<std::uint64_t>(walk);
  for (std::uint64_t k = 1; k < total; ++k) {
    // Digit to move: number of trailing zeros of k in base q. Digit i is site n-1-i.
    std::uint64_t r = k;
    unsigned i = 0;
    while (r % q == 0) {
      r /= q;
      ++i;
    }
    const Vertex v = n - 1 - i;
    const Spin next = static_cast<Spin>(spins[v] + dir[i]);
    h += pr.delta(spins, v, next);
    --counts[spins[v]];
    ++counts[next];
    spins[v] = next;
    if (next == 0 || next == q - 1) dir[i] = -dir[i];
    if ((k & 4095u) == 0) h = pr.evaluate(spins);
    emit();
  }
  return visited;
}

inline double drift_tolerance(const Problem& pr) { return 1e-9 * (1.0 + pr.magnitude()); }

}  // namespace detail

// Global maximum over A_n. Ties are broken towards the lexicographically
// smallest configuration; the value is a direct evaluation of that configuration.
inline SolveResult exact_max(const Problem& pr, const ConstraintSet& cs, double budget = kDefaultEnumerationBudget) {
  const double tol = detail::drift_tolerance(pr);
  double best_running = -std::numeric_limits<double>::infinity();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<Spin> arg;
  SolveResult out;
  out.enumerated = detail::gray_walk(pr, cs, budget, [&](std::span<const Spin> s, double h) {
    if (h < best_running - tol) return;
    best_running = std::max(best_running, h);
    const double exact = pr.evaluate(s);
    if (exact > best || (exact == best && lex_less(s, arg))) {
      best = exact;
      arg.assign(s.begin(), s.end());
    }
  });
  out.value = best;
  out.config = SpinConfig(std::move(arg), pr.q());
  out.method = "exact";
  return out;
}

inline SolveResult exact_max(const WeightTensor& w, const Kernel& kernel, const ConstraintSet& cs,
                             double budget = kDefaultEnumerationBudget) {
  return exact_max(Problem::from_weights(w, kernel), cs, budget);
}

// Phi_n(beta) = (1/n) log sum_{A_n} exp(beta H), kept as max + log-sum so that
// Phi/beta = max/n + log_sum/(n beta) with log_sum >= 0.
struct LogPartition {
  Vertex n = 0;
  double beta = 0.0;
  double max_value = 0.0;  // exact maximum of H over A_n
  SpinConfig argmax;
  double log_sum = 0.0;      // log sum exp(beta (H - max))
  double mean_gap = 0.0;     // Gibbs mean of H - max (<= 0)
  double cardinality = 0.0;  // |A_n|

  double phi() const { return beta * max_value / n + log_sum / n; }
  double phi_over_beta() const { return max_value / n + log_sum / (n * beta); }
  // Entropy of the Gibbs measure, log Z - beta <H>.
  double entropy() const { return log_sum - beta * mean_gap; }
};

namespace detail {

// One pass over A_n with Gibbs weights w = exp(beta (H - max)) <= 1. Near-maximal
// configurations are re-evaluated exactly, so the maximiser has weight exactly 1.
template <class Visit>
void gibbs_pass(const Problem& pr, const ConstraintSet& cs, double beta, double max_value, double budget,
                Visit&& visit) {
  const double tol = drift_tolerance(pr);
  gray_walk(pr, cs, budget, [&](std::span<const Spin> s, double h) {
    if (h >= max_value - tol) h = pr.evaluate(s);
    const double gap = std::min(0.0, h - max_value);
    visit(s, gap, std::exp(beta * gap));
  });
}

}  // namespace detail

inline LogPartition log_partition(const Problem& pr, const ConstraintSet& cs, double beta,
                                  double budget = kDefaultEnumerationBudget) {
  if (!(beta >= 0.0)) throw std::invalid_argument("log_partition: beta must be non-negative");
  const SolveResult best = exact_max(pr, cs, budget);
  LogPartition out;
  out.n = pr.n();
  out.beta = beta;
  out.max_value = best.value;
  out.argmax = best.config;
  out.cardinality = cs.cardinality(pr.n(), pr.q());
  long double z = 0.0L;
  long double first = 0.0L;
  detail::gibbs_pass(pr, cs, beta, best.value, budget, [&](std::span<const Spin>, double gap, double w) {
    z += w;
    first += static_cast<long double>(w) * gap;
  });
  out.log_sum = std::log(static_cast<double>(z));
  out.mean_gap = static_cast<double>(first / z);
  return out;
}

inline LogPartition log_partition(const WeightTensor& w, const Kernel& kernel, const ConstraintSet& cs, double beta,
                                  double budget = kDefaultEnumerationBudget) {
  return log_partition(Problem::from_weights(w, kernel), cs, beta, budget);
}

// d/dbeta (Phi/beta) by central differences against -S(mu_beta)/(n beta^2).
struct EntropyCheck {
  double lhs = 0.0;       // step h
  double lhs_half = 0.0;  // step h/2
  double rhs = 0.0;
  double error() const { return std::abs(lhs - rhs); }
  double error_half() const { return std::abs(lhs_half - rhs); }
  // Observed convergence order log2(err(h)/err(h/2)); about 2 for a smooth Phi.
  double order() const { return std::log2(error() / error_half()); }
};

inline EntropyCheck entropy_derivative_check(const Problem& pr, const ConstraintSet& cs, double beta, double h,
                                             double budget = kDefaultEnumerationBudget) {
  if (!(beta > h && h > 0.0)) throw std::invalid_argument("entropy_derivative_check needs beta > h > 0");
  auto pob = [&](double b) { return log_partition(pr, cs, b, budget).phi_over_beta(); };
  EntropyCheck out;
  out.lhs = (pob(beta + h) - pob(beta - h)) / (2.0 * h);
  out.lhs_half = (pob(beta + h / 2) - pob(beta - h / 2)) / h;
  const LogPartition lp = log_partition(pr, cs, beta, budget);
  out.rhs = -lp.entropy() / (pr.n() * beta * beta);
  return out;
}

// Third derivative of G(M) = (1/(n beta)) log sum_sigma exp(beta H_M(sigma)) in
// the weight entry M_t of a sorted distinct tuple t. With beta = 0 the limit
// (1/n) times the uniform average of H is used, which is linear in M.
struct ThirdDerivativeCheck {
  double fd3 = 0.0;         // step h
  double fd3_half = 0.0;    // step h/2
  double richardson = 0.0;  // (4 fd3_half - fd3) / 3
  double analytic = 0.0;    // beta^2 (p!)^3 / n * third cumulant of f(sigma_t)
  double bound = 0.0;       // 6 beta^2 (p!)^3 ||f||^3 / n
};

inline ThirdDerivativeCheck third_derivative_bound_check(const WeightTensor& w, const Kernel& kernel, double beta,
                                                         Tuple tuple, double h = 0.0,
                                                         double budget = kDefaultEnumerationBudget) {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be non-negative");
  std::sort(tuple.begin(), tuple.end());
  if (tuple.size() != kernel.p() || has_repeats(tuple) || tuple.back() >= w.n())
    throw std::invalid_argument("tuple must be p distinct vertices in range");
  const Problem pr = Problem::from_weights(w, kernel);
  const ConstraintSet cs = ConstraintSet::all();
  const double pf = static_cast<double>(factorial(kernel.p()));
  const double n = static_cast<double>(w.n());
  // Default step: the exponent beta p! f h stays near 1e-2.
  if (h <= 0.0) h = 1e-2 / (std::max(beta, 1e-3) * pf * std::max(kernel.sup_norm(), 1e-12));

  // Gibbs law of f(sigma_t), collapsed onto the kernel table.
  std::vector<long double> mass(kernel.table().size(), 0.0L);
  const double max_value = exact_max(pr, cs, budget).value;
  std::vector<Spin> args(kernel.p());
  detail::gibbs_pass(pr, cs, beta, max_value, budget, [&](std::span<const Spin> s, double, double wt) {
    for (std::size_t k = 0; k < tuple.size(); ++k) args[k] = s[tuple[k]];
    mass[kernel.index(args)] += wt;
  });
  long double z = 0.0L;
  for (auto m : mass) z += m;

  // G(M + delta e_t) - G(M).
  auto shift = [&](double delta) -> long double {
    if (beta == 0.0) {
      long double mean = 0.0L;
      for (std::size_t i = 0; i < mass.size(); ++i) mean += mass[i] / z * (pf * kernel.at(i));
      return static_cast<long double>(delta) * mean / static_cast<long double>(n);
    }
    long double acc = 0.0L;
    for (std::size_t i = 0; i < mass.size(); ++i)
      if (mass[i] > 0) acc += mass[i] / z * std::exp(static_cast<long double>(beta) * delta * pf * kernel.at(i));
    return std::log(acc) / (static_cast<long double>(n) * beta);
  };
  auto fd = [&](double step) {
    const long double v = shift(2 * step) - 2 * shift(step) + 2 * shift(-step) - shift(-2 * step);
    return static_cast<double>(v / (2.0L * step * step * step));
  };

  ThirdDerivativeCheck out;
  out.fd3 = fd(h);
  out.fd3_half = fd(h / 2);
  out.richardson = (4.0 * out.fd3_half - out.fd3) / 3.0;

  long double m1 = 0, m2 = 0, m3 = 0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const long double f = kernel.at(i);
    const long double pr_i = mass[i] / z;
    m1 += pr_i * f;
    m2 += pr_i * f * f;
    m3 += pr_i * f * f * f;
  }
  const long double k3 = m3 - 3 * m2 * m1 + 2 * m1 * m1 * m1;
  out.analytic = static_cast<double>(beta * beta * pf * pf * pf / n * k3);
  const double fs = kernel.sup_norm();
  out.bound = 6.0 * beta * beta * pf * pf * pf * fs * fs * fs / n;
  return out;
}

}  // namespace hyperglass
