#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperglass/combinatorics.hpp"
#include "hyperglass/hypergraph.hpp"
#include "hyperglass/kernel.hpp"
#include "hyperglass/rng.hpp"

namespace hyperglass {

// Assignment of a q-letter alphabet to n sites.
struct SpinConfig {
  std::vector<Spin> spins;
  unsigned q = 2;

  SpinConfig() = default;
  SpinConfig(std::vector<Spin> s, unsigned alphabet) : spins(std::move(s)), q(alphabet) {
    for (Spin x : spins)
      if (x >= q) throw std::invalid_argument("spin value outside the alphabet");
  }

  static SpinConfig from_signs(std::span<const int> signs) {
    std::vector<Spin> s(signs.size());
    for (std::size_t i = 0; i < signs.size(); ++i) {
      if (signs[i] != 1 && signs[i] != -1) throw std::invalid_argument("signs must be +1 or -1");
      s[i] = spin_from_sign(signs[i]);
    }
    return SpinConfig(std::move(s), 2);
  }

  std::size_t size() const noexcept { return spins.size(); }

  std::vector<std::size_t> counts() const {
    std::vector<std::size_t> c(q, 0);
    for (Spin x : spins) ++c[x];
    return c;
  }

  // Type fractions m_k = #{i : sigma_i = k} / n.
  std::vector<double> fractions() const {
    std::vector<double> m(q, 0.0);
    if (spins.empty()) return m;
    for (Spin x : spins) m[x] += 1.0;
    for (double& v : m) v /= static_cast<double>(spins.size());
    return m;
  }

  std::vector<int> signs() const {
    if (q != 2) throw std::logic_error("signs() needs a two-letter alphabet");
    std::vector<int> s(spins.size());
    for (std::size_t i = 0; i < spins.size(); ++i) s[i] = spin_sign(spins[i]);
    return s;
  }

  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;
};

// Sparse symmetric array A over sorted distinct p-tuples.
class WeightTensor {
 public:
  WeightTensor(Vertex n, unsigned p) : n_(n), p_(p) {
    if (p < 1) throw std::invalid_argument("WeightTensor arity must be positive");
  }

  // Adds `w` to the entry of the (any-order) distinct tuple.
  void add(Tuple t, double w) {
    if (t.size() != p_) throw std::invalid_argument("WeightTensor: tuple arity mismatch");
    std::sort(t.begin(), t.end());
    if (has_repeats(t)) throw std::invalid_argument("WeightTensor: tuple vertices must be distinct");
    if (t.back() >= n_) throw std::invalid_argument("WeightTensor: vertex out of range");
    entries_[std::move(t)] += w;
  }

  double at(Tuple t) const {
    std::sort(t.begin(), t.end());
    auto it = entries_.find(t);
    return it == entries_.end() ? 0.0 : it->second;
  }

  Vertex n() const noexcept { return n_; }
  unsigned p() const noexcept { return p_; }
  const std::map<Tuple, double>& entries() const noexcept { return entries_; }

  double max_abs() const noexcept {
    double b = 0.0;
    for (const auto& [t, w] : entries_) b = std::max(b, std::abs(w));
    return b;
  }

  // Adjacency array: multiplicity / (p-1)! per edge. Tuples with a repeated
  // vertex and short remainder edges have no distinct-index entry and are skipped.
  static WeightTensor adjacency(const Hypergraph& g) {
    WeightTensor w(g.n(), g.p());
    const double unit = 1.0 / static_cast<double>(factorial(g.p() - 1));
    for (const auto& e : g.edges()) {
      if (e.vertices.size() != g.p() || has_repeats(e.vertices)) continue;
      w.entries_[e.vertices] += unit * e.multiplicity;
    }
    return w;
  }

 private:
  Vertex n_;
  unsigned p_;
  std::map<Tuple, double> entries_;
};

struct XorClause {
  Tuple vars;    // sorted, distinct
  int sign = 1;  // +1 for b = 0, -1 for b = 1

  friend bool operator==(const XorClause&, const XorClause&) = default;
};

struct XorsatInstance {
  Vertex n = 0;
  unsigned p = 3;
  std::vector<XorClause> clauses;
};

// Random XORSAT: clause hypergraph from the ER p-uniform ensemble, b ~ Ber(1/2).
inline XorsatInstance gen_xorsat(Vertex n, unsigned p, double d, Rng& rng) {
  Hypergraph g = gen_er_hypergraph(n, p, d, rng);
  XorsatInstance inst{n, p, {}};
  inst.clauses.reserve(g.edge_count());
  for (const auto& e : g.edges()) inst.clauses.push_back({e.vertices, (rng() & 1u) ? -1 : 1});
  return inst;
}

// ---------------------------------------------------------------------------
// Objective evaluation

// Sum over ordered distinct tuples of A f, via p! times the sorted-tuple sum.
inline double hamiltonian(const WeightTensor& weights, const Kernel& kernel, const SpinConfig& sigma) {
  if (weights.p() != kernel.p()) throw std::invalid_argument("hamiltonian: arity mismatch");
  if (sigma.size() != weights.n()) throw std::invalid_argument("hamiltonian: configuration length mismatch");
  if (sigma.q != kernel.q()) throw std::invalid_argument("hamiltonian: alphabet mismatch");
  const double pf = static_cast<double>(factorial(kernel.p()));
  std::vector<Spin> args(kernel.p());
  double h = 0.0;
  for (const auto& [t, w] : weights.entries()) {
    for (std::size_t k = 0; k < t.size(); ++k) args[k] = sigma.spins[t[k]];
    h += pf * w * kernel(args);
  }
  return h;
}

// Edges {i, j} (with multiplicity) whose endpoints carry different labels.
inline std::size_t qcut_value(const Hypergraph& g, unsigned q, const SpinConfig& sigma) {
  if (g.p() != 2) throw std::invalid_argument("qcut_value needs a graph");
  if (sigma.size() != g.n() || sigma.q != q) throw std::invalid_argument("qcut_value: configuration mismatch");
  std::size_t cut = 0;
  for (const auto& e : g.edges()) {
    if (e.vertices.size() == 2 && sigma.spins[e.vertices[0]] != sigma.spins[e.vertices[1]]) cut += e.multiplicity;
  }
  return cut;
}

inline std::size_t xorsat_satisfied(const XorsatInstance& inst, const SpinConfig& sigma) {
  if (sigma.q != 2 || sigma.size() != inst.n) throw std::invalid_argument("xorsat_satisfied: configuration mismatch");
  std::size_t sat = 0;
  for (const auto& c : inst.clauses) {
    int s = c.sign;
    for (Vertex v : c.vars) s *= spin_sign(sigma.spins[v]);
    if (s > 0) ++sat;
  }
  return sat;
}

// Edges across a balanced +-1 partition.
inline std::size_t bisection_cut(const Hypergraph& g, const SpinConfig& sigma) {
  if (g.p() != 2 || sigma.q != 2 || sigma.size() != g.n()) throw std::invalid_argument("bisection_cut: mismatch");
  const auto c = sigma.counts();
  if (c[0] != c[1]) throw std::invalid_argument("bisection_cut: configuration is not balanced");
  return qcut_value(g, 2, sigma);
}

// ---------------------------------------------------------------------------
// Annealed polynomial Psi(m) = sum f(j_1..j_p) m_{j_1}...m_{j_p} and friends

namespace detail {

inline void check_simplex(const Kernel& kernel, std::span<const double> m) {
  if (m.size() != kernel.q()) throw std::invalid_argument("psi: probability vector has wrong length");
  double sum = 0.0;
  for (double v : m) {
    if (v < -1e-12) throw std::invalid_argument("psi: negative probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("psi: probabilities do not sum to one");
}

// sum over x with the first `fixed` arguments pinned of f(x) * prod_{k >= fixed} m_{x_k}.
inline double partial_contraction(const Kernel& kernel, std::span<const double> m, std::span<const Spin> pinned) {
  const unsigned p = kernel.p();
  const unsigned q = kernel.q();
  const std::size_t free = p - pinned.size();
  std::size_t combos = 1;
  for (std::size_t i = 0; i < free; ++i) combos *= q;
  std::vector<Spin> args(p);
  std::copy(pinned.begin(), pinned.end(), args.begin());
  double total = 0.0;
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t rest = c;
    double weight = 1.0;
    for (std::size_t k = pinned.size(); k < p; ++k) {
      args[k] = static_cast<Spin>(rest % q);
      rest /= q;
      weight *= m[args[k]];
    }
    if (weight != 0.0) total += weight * kernel(args);
  }
  return total;
}

}  // namespace detail

inline double psi(const Kernel& kernel, std::span<const double> m) {
  detail::check_simplex(kernel, m);
  return detail::partial_contraction(kernel, m, {});
}

// Gradient of Psi in all q coordinates: p * sum f(j, j_2..j_p) m_{j_2}...m_{j_p}.
inline std::vector<double> psi_gradient(const Kernel& kernel, std::span<const double> m) {
  std::vector<double> g(kernel.q());
  for (unsigned j = 0; j < kernel.q(); ++j) {
    const Spin pin[1] = {static_cast<Spin>(j)};
    g[j] = kernel.p() * detail::partial_contraction(kernel, m, pin);
  }
  return g;
}

// Hessian of Psi in all q coordinates.
inline Eigen::MatrixXd psi_hessian(const Kernel& kernel, std::span<const double> m) {
  const unsigned q = kernel.q();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(q, q);
  if (kernel.p() < 2) return h;
  const double scale = static_cast<double>(kernel.p()) * (kernel.p() - 1);
  for (unsigned i = 0; i < q; ++i)
    for (unsigned j = 0; j < q; ++j) {
      const Spin pin[2] = {static_cast<Spin>(i), static_cast<Spin>(j)};
      h(i, j) = scale * detail::partial_contraction(kernel, m, pin);
    }
  return h;
}

// Hessian of Psi-bar, Psi restricted to the free coordinates (m_1..m_{q-1}),
// with the last coordinate eliminated as 1 - sum of the others.
inline Eigen::MatrixXd psi_bar_hessian(const Kernel& kernel, std::span<const double> m) {
  const Eigen::MatrixXd h = psi_hessian(kernel, m);
  const Eigen::Index last = h.rows() - 1;
  Eigen::MatrixXd out(last, last);
  for (Eigen::Index i = 0; i < last; ++i)
    for (Eigen::Index j = 0; j < last; ++j) out(i, j) = h(i, j) - h(i, last) - h(last, j) + h(last, last);
  return out;
}

// Euclidean projection onto the probability simplex.
inline std::vector<double> project_to_simplex(std::vector<double> v) {
  std::vector<double> s = v;
  std::sort(s.begin(), s.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    cumulative += s[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (s[k] - t > 0.0) theta = t;
  }
  for (double& x : v) x = std::max(x - theta, 0.0);
  return v;
}

struct PsiMaximum {
  std::vector<double> m_star;
  double value = 0.0;
  double min_eigenvalue = 0.0;  // of -Hess(Psi-bar) at m_star
  double projected_gradient_norm = 0.0;
  bool interior = false;
  bool c2_holds = false;  // interior maximiser with strictly concave Psi-bar
};

inline double projected_gradient_norm(const Kernel& kernel, std::span<const double> m) {
  const auto g = psi_gradient(kernel, m);
  std::vector<double> step(m.begin(), m.end());
  for (std::size_t i = 0; i < step.size(); ++i) step[i] += g[i];
  const auto proj = project_to_simplex(step);
  double norm = 0.0;
  for (std::size_t i = 0; i < proj.size(); ++i) norm += (proj[i] - m[i]) * (proj[i] - m[i]);
  return std::sqrt(norm);
}

// Maximises Psi over the simplex by projected gradient ascent from every
// lattice point of a simplex grid (at least 200 starts), then polishes an
// interior optimum with Newton steps on Psi-bar.
inline PsiMaximum psi_max_and_hessian(const Kernel& kernel, double tol = 1e-10) {
  const unsigned q = kernel.q();
  if (q > 8 || kernel.p() > 4) throw std::invalid_argument("psi_max_and_hessian supports q <= 8 and p <= 4");

  unsigned resolution = 1;
  while (binomial(resolution + q - 1, q - 1) < 200) ++resolution;

  auto ascend = [&](std::vector<double> m) {
    double value = psi(kernel, m);
    for (int iter = 0; iter < 20000; ++iter) {
      const auto g = psi_gradient(kernel, m);
      double step = 1.0;
      std::vector<double> next;
      double next_value = value;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
        std::vector<double> trial(m);
        for (unsigned i = 0; i < q; ++i) trial[i] += step * g[i];
        next = project_to_simplex(trial);
        double ascent = 0.0;
        for (unsigned i = 0; i < q; ++i) ascent += g[i] * (next[i] - m[i]);
        next_value = psi(kernel, next);
        if (next_value >= value + 1e-4 * ascent) {
          moved = true;
          break;
        }
      }
      if (!moved) break;
      double change = 0.0;
      for (unsigned i = 0; i < q; ++i) change = std::max(change, std::abs(next[i] - m[i]));
      m = std::move(next);
      value = next_value;
      if (change < tol) break;
    }
    return std::pair{m, value};
  };

  std::vector<double> best;
  double best_value = -std::numeric_limits<double>::infinity();
  // Every lattice point of the simplex with denominator `resolution`.
  std::vector<unsigned> comp(q, 0);
  auto visit = [&](auto&& self, unsigned pos, unsigned left) -> void {
    if (pos + 1 == q) {
      comp[pos] = left;
      std::vector<double> start(q);
      for (unsigned i = 0; i < q; ++i) start[i] = static_cast<double>(comp[i]) / resolution;
      auto [m, v] = ascend(start);
      if (v > best_value + 1e-12) {
        best_value = v;
        best = m;
      }
      return;
    }
    for (unsigned c = 0; c <= left; ++c) {
      comp[pos] = c;
      self(self, pos + 1, left - c);
    }
  };
  visit(visit, 0, resolution);

  PsiMaximum out;
  out.m_star = best;
  out.interior = std::all_of(best.begin(), best.end(), [](double v) { return v > 1e-7; });

  if (out.interior && q > 1) {
    // Newton polish on the free coordinates.
    for (int iter = 0; iter < 20; ++iter) {
      const auto g = psi_gradient(kernel, out.m_star);
      Eigen::VectorXd gbar(q - 1);
      for (unsigned i = 0; i + 1 < q; ++i) gbar[i] = g[i] - g[q - 1];
      const Eigen::MatrixXd hbar = psi_bar_hessian(kernel, out.m_star);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-hbar);
      if (es.eigenvalues().minCoeff() <= 1e-9 || gbar.norm() < 1e-15) break;
      const Eigen::VectorXd delta = hbar.ldlt().solve(-gbar);
      std::vector<double> trial(out.m_star);
      double last = 1.0;
      for (unsigned i = 0; i + 1 < q; ++i) {
        trial[i] += delta[i];
        last -= trial[i];
      }
      trial[q - 1] = last;
      if (std::any_of(trial.begin(), trial.end(), [](double v) { return v <= 0.0; })) break;
      if (psi(kernel, project_to_simplex(trial)) + 1e-15 < psi(kernel, out.m_star)) break;
      out.m_star = trial;
    }
  }

  out.value = psi(kernel, project_to_simplex(out.m_star));
  out.projected_gradient_norm = projected_gradient_norm(kernel, out.m_star);
  if (q > 1) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-psi_bar_hessian(kernel, out.m_star));
    out.min_eigenvalue = es.eigenvalues().minCoeff();
  }
  out.c2_holds = out.interior && out.min_eigenvalue > 1e-9;
  return out;
}

// Residual of the flat-field condition at type fractions m:
// r_j = sum f(j, j_2..j_p) m_{j_2}...m_{j_p} - eta, eta the alphabet average.
inline std::vector<double> c1_residual(const Kernel& kernel, std::span<const double> m) {
  std::vector<double> r(kernel.q());
  for (unsigned j = 0; j < kernel.q(); ++j) {
    const Spin pin[1] = {static_cast<Spin>(j)};
    r[j] = detail::partial_contraction(kernel, m, pin);
  }
  double eta = 0.0;
  for (double v : r) eta += v;
  eta /= static_cast<double>(r.size());
  for (double& v : r) v -= eta;
  return r;
}

inline std::vector<double> c1_residual(const Kernel& kernel, const SpinConfig& sigma) {
  if (sigma.q != kernel.q()) throw std::invalid_argument("c1_residual: alphabet mismatch");
  const auto m = sigma.fractions();
  return c1_residual(kernel, m);
}

// ---------------------------------------------------------------------------
// XORSAT text format: header `p n m`, then `b i_1 ... i_p` with b in {0, 1}.

inline void write_xorsat(std::ostream& os, const XorsatInstance& inst) {
  os << inst.p << ' ' << inst.n << ' ' << inst.clauses.size() << '\n';
  for (const auto& c : inst.clauses) {
    os << (c.sign > 0 ? 0 : 1);
    for (Vertex v : c.vars) os << ' ' << v;
    os << '\n';
  }
}

inline XorsatInstance read_xorsat(std::istream& is) {
  XorsatInstance inst;
  std::size_t m;
  if (!(is >> inst.p >> inst.n >> m)) throw std::runtime_error("bad xorsat header");
  inst.clauses.reserve(m);
  for (std::size_t a = 0; a < m; ++a) {
    int b;
    if (!(is >> b) || (b != 0 && b != 1)) throw std::runtime_error("bad xorsat clause sign");
    XorClause c;
    c.sign = b == 0 ? 1 : -1;
    c.vars.resize(inst.p);
    for (auto& v : c.vars) {
      long long x;
      if (!(is >> x) || x < 0 || x >= static_cast<long long>(inst.n)) throw std::runtime_error("bad xorsat variable");
      v = static_cast<Vertex>(x);
    }
    std::sort(c.vars.begin(), c.vars.end());
    if (has_repeats(c.vars)) throw std::runtime_error("xorsat clause repeats a variable");
    inst.clauses.push_back(std::move(c));
  }
  return inst;
}

}  // namespace hyperglass
