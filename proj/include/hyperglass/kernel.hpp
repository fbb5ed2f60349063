#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperglass/combinatorics.hpp"

namespace hyperglass {

using Spin = std::uint8_t;

// Fixed encoding of the two-letter alphabet as Ising spins: 0 -> +1, 1 -> -1.
inline constexpr int spin_sign(Spin x) noexcept { return x == 0 ? 1 : -1; }
inline constexpr Spin spin_from_sign(int s) noexcept { return s > 0 ? 0 : 1; }

// Symmetric kernel f : X^p -> R over the alphabet X = {0, ..., q-1}.
//
// Values are defined on sorted argument multisets, so f is permutation
// invariant by construction. A dense q^p lookup table is derived from the
// multiset values for evaluation.
class Kernel {
 public:
  Kernel() = default;

  // `f` is only ever called with non-decreasing arguments.
  template <class F>
  static Kernel from_function(unsigned p, unsigned q, F&& f, std::string name = "custom") {
    if (p < 1 || q < 1) throw std::invalid_argument("kernel needs p >= 1 and q >= 1");
    double cells = std::pow(static_cast<double>(q), static_cast<double>(p));
    if (cells > 1 << 22) throw std::invalid_argument("kernel table too large");
    Kernel k;
    k.p_ = p;
    k.q_ = q;
    k.name_ = std::move(name);
    k.table_.resize(static_cast<std::size_t>(cells));
    std::vector<Spin> args(p);
    std::vector<Spin> sorted(p);
    for (std::size_t idx = 0; idx < k.table_.size(); ++idx) {
      std::size_t rest = idx;
      for (unsigned i = 0; i < p; ++i) {
        args[i] = static_cast<Spin>(rest % q);
        rest /= q;
      }
      sorted = args;
      std::sort(sorted.begin(), sorted.end());
      k.table_[idx] = f(std::span<const Spin>(sorted));
    }
    return k;
  }

  // f(x, y) = 1(x != y): the q-cut kernel.
  static Kernel cut(unsigned q) {
    return from_function(2, q, [](std::span<const Spin> a) { return a[0] != a[1] ? 1.0 : 0.0; }, "cut");
  }

  // f(x_1..x_p) = prod_k s(x_k) with s the fixed +-1 encoding: the XOR kernel.
  static Kernel parity(unsigned p) {
    Kernel k = from_function(p, 2, [](std::span<const Spin> a) {
      int s = 1;
      for (Spin x : a) s *= spin_sign(x);
      return static_cast<double>(s);
    }, "parity");
    k.parity_ = true;
    return k;
  }

  static Kernel constant(unsigned p, unsigned q, double c) {
    return from_function(p, q, [c](std::span<const Spin>) { return c; }, "constant");
  }

  // f(x, y) = 1(x = y = label).
  static Kernel single_label(unsigned q, Spin label) {
    return from_function(2, q, [label](std::span<const Spin> a) { return a[0] == label && a[1] == label ? 1.0 : 0.0; },
                         "single_label");
  }

  Kernel scaled(double factor) const {
    Kernel k = *this;
    for (double& v : k.table_) v *= factor;
    k.name_ = name_ + "*" + std::to_string(factor);
    return k;
  }

  unsigned p() const noexcept { return p_; }
  unsigned q() const noexcept { return q_; }
  bool is_parity() const noexcept { return parity_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<double>& table() const noexcept { return table_; }

  double sup_norm() const noexcept {
    double s = 0.0;
    for (double v : table_) s = std::max(s, std::abs(v));
    return s;
  }

  // Invariant under every relabelling of the alphabet.
  bool label_symmetric() const {
    std::vector<Spin> perm(q_);
    std::iota(perm.begin(), perm.end(), Spin{0});
    std::vector<Spin> args(p_);
    do {
      for (std::size_t idx = 0; idx < table_.size(); ++idx) {
        std::size_t rest = idx;
        std::size_t mapped = 0;
        std::size_t base = 1;
        for (unsigned i = 0; i < p_; ++i) {
          mapped += perm[rest % q_] * base;
          rest /= q_;
          base *= q_;
        }
        if (table_[mapped] != table_[idx]) return false;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return true;
  }

  double operator()(std::span<const Spin> args) const {
    if (args.size() == p_) return table_[index(args)];
    if (parity_) {
      int s = 1;
      for (Spin x : args) s *= spin_sign(x);
      return static_cast<double>(s);
    }
    throw std::invalid_argument("kernel evaluated with wrong arity");
  }

  std::size_t index(std::span<const Spin> args) const noexcept {
    std::size_t idx = 0;
    for (std::size_t i = args.size(); i-- > 0;) idx = idx * q_ + args[i];
    return idx;
  }

  double at(std::size_t idx) const noexcept { return table_[idx]; }

 private:
  unsigned p_ = 0;
  unsigned q_ = 0;
  bool parity_ = false;
  std::string name_;
  std::vector<double> table_;
};

}  // namespace hyperglass
