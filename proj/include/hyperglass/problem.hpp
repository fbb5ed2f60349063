#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperglass/combinatorics.hpp"
#include "hyperglass/hypergraph.hpp"
#include "hyperglass/kernel.hpp"
#include "hyperglass/objectives.hpp"
#include "hyperglass/rng.hpp"

namespace hyperglass {

// A_n: the feasible configurations.
class ConstraintSet {
 public:
  enum class Tag { all, balanced_bisection, fixed_type_counts };

  static ConstraintSet all() { return ConstraintSet(Tag::all, {}); }
  static ConstraintSet balanced_bisection() { return ConstraintSet(Tag::balanced_bisection, {}); }
  static ConstraintSet fixed_type_counts(std::vector<std::size_t> counts) {
    return ConstraintSet(Tag::fixed_type_counts, std::move(counts));
  }

  Tag tag() const noexcept { return tag_; }
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }

  std::string name() const {
    switch (tag_) {
      case Tag::all: return "all";
      case Tag::balanced_bisection: return "balanced_bisection";
      case Tag::fixed_type_counts: return "fixed_type_counts";
    }
    return "?";
  }

  // Required label counts for (n, q), or empty when unconstrained. An
  // infeasible request (odd n for a bisection, counts not summing to n)
  // yields a vector that no configuration matches.
  std::vector<std::size_t> required_counts(Vertex n, unsigned q) const {
    switch (tag_) {
      case Tag::all: return {};
      case Tag::balanced_bisection:
        if (q != 2) throw std::invalid_argument("balanced bisection needs q = 2");
        if (n % 2 != 0) return {n / 2 + 1, n / 2 + 1};
        return {n / 2, n / 2};
      case Tag::fixed_type_counts:
        if (counts_.size() != q) throw std::invalid_argument("type counts do not match the alphabet size");
        return counts_;
    }
    return {};
  }

  bool contains(const SpinConfig& sigma) const {
    if (tag_ == Tag::all) return true;
    return sigma.counts() == required_counts(static_cast<Vertex>(sigma.size()), sigma.q);
  }

  // |A_n| in closed form (as a double; exact below 2^53).
  double cardinality(Vertex n, unsigned q) const {
    if (tag_ == Tag::all) return std::pow(static_cast<double>(q), static_cast<double>(n));
    const auto c = required_counts(n, q);
    if (std::accumulate(c.begin(), c.end(), std::size_t{0}) != n) return 0.0;
    return multinomial(c);
  }

 private:
  ConstraintSet(Tag t, std::vector<std::size_t> c) : tag_(t), counts_(std::move(c)) {}
  Tag tag_;
  std::vector<std::size_t> counts_;
};

// Objective H(sigma) = offset + sum_t c_t f(sigma restricted to term t).
//
// Terms are evaluated in insertion order, so a problem built from a
// WeightTensor reproduces hamiltonian() bit for bit.
class Problem {
 public:
  struct Term {
    Tuple vertices;  // sorted; may repeat a vertex or be shorter than p
    double coefficient = 0.0;
  };

  Problem(Vertex n, Kernel kernel) : n_(n), kernel_(std::move(kernel)), incidence_(n) {
    if (kernel_.p() > 16) throw std::invalid_argument("kernel arity above 16");
  }

  void add_term(Tuple vertices, double coefficient) {
    std::sort(vertices.begin(), vertices.end());
    if (vertices.empty() || vertices.back() >= n_) throw std::invalid_argument("term vertex out of range");
    if (vertices.size() > kernel_.p()) throw std::invalid_argument("term longer than the kernel arity");
    if (vertices.size() < kernel_.p() && !kernel_.is_parity())
      throw std::invalid_argument("short terms are only defined for the parity kernel");
    const auto id = static_cast<std::uint32_t>(terms_.size());
    for (std::size_t k = 0; k < vertices.size(); ++k)
      if (k == 0 || vertices[k] != vertices[k - 1]) incidence_[vertices[k]].push_back(id);
    terms_.push_back(Term{std::move(vertices), coefficient});
  }

  void set_offset(double c) noexcept { offset_ = c; }

  Vertex n() const noexcept { return n_; }
  unsigned q() const noexcept { return kernel_.q(); }
  const Kernel& kernel() const noexcept { return kernel_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  const std::vector<std::uint32_t>& incident(Vertex v) const noexcept { return incidence_[v]; }
  double offset() const noexcept { return offset_; }

  double term_value(const Term& t, std::span<const Spin> spins) const {
    Spin args[16];
    for (std::size_t k = 0; k < t.vertices.size(); ++k) args[k] = spins[t.vertices[k]];
    return t.coefficient * kernel_(std::span<const Spin>(args, t.vertices.size()));
  }

  double evaluate(std::span<const Spin> spins) const {
    if (spins.size() != n_) throw std::invalid_argument("configuration length mismatch");
    double h = 0.0;
    for (const auto& t : terms_) h += term_value(t, spins);
    return h + offset_;
  }

  double evaluate(const SpinConfig& sigma) const {
    if (sigma.q != q()) throw std::invalid_argument("alphabet mismatch");
    return evaluate(sigma.spins);
  }

  // Change of H when vertex v moves to label x (spins left untouched).
  double delta(std::span<Spin> spins, Vertex v, Spin x) const {
    const Spin old = spins[v];
    if (old == x) return 0.0;
    double before = 0.0;
    for (auto id : incidence_[v]) before += term_value(terms_[id], spins);
    spins[v] = x;
    double after = 0.0;
    for (auto id : incidence_[v]) after += term_value(terms_[id], spins);
    spins[v] = old;
    return after - before;
  }

  // sum_t |c_t| * sup|f|: scale of H used for floating-point tolerances.
  double magnitude() const noexcept {
    double s = std::abs(offset_);
    for (const auto& t : terms_) s += std::abs(t.coefficient);
    return s * std::max(kernel_.sup_norm(), 1.0);
  }

  std::size_t max_term_arity() const noexcept {
    std::size_t a = 0;
    for (const auto& t : terms_) a = std::max(a, t.vertices.size());
    return a;
  }

  // H over ordered distinct tuples of a weight array: coefficient p! w per sorted tuple.
  static Problem from_weights(const WeightTensor& w, const Kernel& kernel) {
    if (w.p() != kernel.p()) throw std::invalid_argument("arity mismatch between weights and kernel");
    Problem pr(w.n(), kernel);
    const double pf = static_cast<double>(factorial(kernel.p()));
    for (const auto& [t, value] : w.entries()) pr.add_term(t, pf * value);
    return pr;
  }

  // H of a hypergraph with adjacency weights 1/(p-1)!: coefficient p per edge
  // copy. Repeated-vertex tuples keep f on their repeated arguments; a short
  // remainder edge is kept for the parity kernel and dropped otherwise.
  static Problem from_hypergraph(const Hypergraph& g, const Kernel& kernel) {
    if (g.p() != kernel.p()) throw std::invalid_argument("arity mismatch between hypergraph and kernel");
    Problem pr(g.n(), kernel);
    for (const auto& e : g.edges()) {
      if (e.vertices.size() < g.p() && !kernel.is_parity()) {
        ++pr.dropped_short_;
        continue;
      }
      pr.add_term(e.vertices, static_cast<double>(g.p()) * e.multiplicity);
    }
    return pr;
  }

  // sum_a b_a prod sigma: satisfied clauses = m/2 + H/2.
  static Problem from_xorsat(const XorsatInstance& inst) {
    Problem pr(inst.n, Kernel::parity(inst.p));
    for (const auto& c : inst.clauses) pr.add_term(c.vars, static_cast<double>(c.sign));
    return pr;
  }

  std::size_t dropped_short_edges() const noexcept { return dropped_short_; }

 private:
  Vertex n_;
  Kernel kernel_;
  std::vector<Term> terms_;
  std::vector<std::vector<std::uint32_t>> incidence_;
  double offset_ = 0.0;
  std::size_t dropped_short_ = 0;
};

// Lexicographic order on configurations, first site most significant.
inline bool lex_less(std::span<const Spin> a, std::span<const Spin> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace hyperglass
