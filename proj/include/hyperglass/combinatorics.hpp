#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace hyperglass {

using Vertex = std::uint32_t;
using Tuple = std::vector<Vertex>;

inline std::uint64_t factorial(unsigned k) {
  if (k > 20) throw std::overflow_error("factorial: argument exceeds 20");
  std::uint64_t out = 1;
  for (unsigned i = 2; i <= k; ++i) out *= i;
  return out;
}

// Exact C(n, k); throws on 64-bit overflow.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > static_cast<unsigned __int128>(UINT64_MAX)) throw std::overflow_error("binomial overflow");
  }
  return static_cast<std::uint64_t>(acc);
}

inline double binomial_real(double n, unsigned k) {
  double out = 1.0;
  for (unsigned i = 0; i < k; ++i) out *= (n - i) / (i + 1);
  return out;
}

// n! / prod(counts_k!) for a composition of n.
inline double multinomial(std::span<const std::size_t> counts) {
  double out = 1.0;
  std::size_t seen = 0;
  for (std::size_t c : counts) {
    for (std::size_t i = 1; i <= c; ++i) out *= static_cast<double>(seen + i) / static_cast<double>(i);
    seen += c;
  }
  return out;
}

// Number of distinct orderings of a sorted tuple with possible repeats.
inline std::uint64_t orderings(std::span<const Vertex> sorted) {
  std::uint64_t out = factorial(static_cast<unsigned>(sorted.size()));
  std::size_t run = 1;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
      ++run;
    } else {
      out /= factorial(static_cast<unsigned>(run));
      run = 1;
    }
  }
  return out;
}

inline bool has_repeats(std::span<const Vertex> sorted) {
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

// Visits every strictly increasing k-tuple over [0, n) in lexicographic order.
template <class Fn>
void for_each_subset(Vertex n, unsigned k, Fn&& fn) {
  if (k > n) return;
  Tuple t(k);
  for (unsigned i = 0; i < k; ++i) t[i] = i;
  if (k == 0) {
    fn(std::span<const Vertex>(t));
    return;
  }
  while (true) {
    fn(std::span<const Vertex>(t));
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && t[i] == n - k + static_cast<unsigned>(i)) --i;
    if (i < 0) return;
    ++t[i];
    for (unsigned j = static_cast<unsigned>(i) + 1; j < k; ++j) t[j] = t[j - 1] + 1;
  }
}

// Visits every non-decreasing k-tuple over [0, n) in lexicographic order.
template <class Fn>
void for_each_multiset(Vertex n, unsigned k, Fn&& fn) {
  if (n == 0) return;
  Tuple t(k, 0);
  while (true) {
    fn(std::span<const Vertex>(t));
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && t[i] == n - 1) --i;
    if (i < 0) return;
    ++t[i];
    for (unsigned j = static_cast<unsigned>(i) + 1; j < k; ++j) t[j] = t[i];
  }
}

// Rank of a strictly increasing tuple in colex order (combinatorial number system).
inline std::uint64_t subset_rank(std::span<const Vertex> sorted) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) r += binomial(sorted[i], i + 1);
  return r;
}

}  // namespace hyperglass
