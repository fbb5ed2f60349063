#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "hyperglass/combinatorics.hpp"
#include "hyperglass/rng.hpp"

namespace hyperglass {

// One distinct sorted vertex tuple and how many times it occurs.
struct Edge {
  Tuple vertices;
  std::uint32_t multiplicity = 1;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// p-uniform (multi-)hypergraph on vertices [0, n).
//
// Edges are canonical: each tuple sorted ascending, the edge list sorted
// lexicographically and free of duplicate tuples (repeats are folded into
// `multiplicity`). Only multi-hypergraphs may contain tuples with repeated
// vertices, and at most one of their tuples may be shorter than p (the
// remainder group left over by a clone matching).
class Hypergraph {
 public:
  Hypergraph() = default;
  Hypergraph(Vertex n, unsigned p, bool multi) : n_(n), p_(p), multi_(multi) {
    if (p < 2) throw std::invalid_argument("hypergraph arity must be at least 2");
  }

  // Builds from raw (unsorted, possibly repeated) vertex groups.
  static Hypergraph from_groups(Vertex n, unsigned p, bool multi, std::vector<Tuple> groups) {
    Hypergraph g(n, p, multi);
    for (auto& t : groups) std::sort(t.begin(), t.end());
    std::sort(groups.begin(), groups.end());
    for (auto& t : groups) {
      if (!g.edges_.empty() && g.edges_.back().vertices == t) {
        ++g.edges_.back().multiplicity;
      } else {
        g.edges_.push_back(Edge{std::move(t), 1});
      }
    }
    g.validate();
    return g;
  }

  Vertex n() const noexcept { return n_; }
  unsigned p() const noexcept { return p_; }
  bool multi() const noexcept { return multi_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  // Number of edges counted with multiplicity.
  std::size_t edge_count() const noexcept {
    std::size_t m = 0;
    for (const auto& e : edges_) m += e.multiplicity;
    return m;
  }

  // Edge-slots containing each vertex, with multiplicity.
  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> deg(n_, 0);
    for (const auto& e : edges_)
      for (Vertex v : e.vertices) deg[v] += e.multiplicity;
    return deg;
  }

  bool has_short_edge() const noexcept {
    return std::any_of(edges_.begin(), edges_.end(), [&](const Edge& e) { return e.vertices.size() < p_; });
  }

  bool probability_clamped() const noexcept { return clamped_; }
  void set_probability_clamped(bool v) noexcept { clamped_ = v; }

  void validate() const {
    std::size_t short_edges = 0;
    for (const auto& e : edges_) {
      if (e.vertices.empty() || e.vertices.size() > p_) throw std::logic_error("edge arity out of range");
      if (e.vertices.back() >= n_) throw std::logic_error("vertex index out of range");
      if (!std::is_sorted(e.vertices.begin(), e.vertices.end())) throw std::logic_error("edge tuple not sorted");
      if (e.vertices.size() < p_) short_edges += e.multiplicity;
      if (!multi_ && (e.multiplicity != 1 || has_repeats(e.vertices) || e.vertices.size() != p_))
        throw std::logic_error("simple hypergraph holds a multi-edge, repeated vertex or short edge");
    }
    if (short_edges > 1) throw std::logic_error("more than one short edge");
  }

 private:
  Vertex n_ = 0;
  unsigned p_ = 2;
  bool multi_ = false;
  bool clamped_ = false;
  std::vector<Edge> edges_;
};

// Planted-bisection graph; labels are +1 on the first half, -1 on the second.
struct SbmGraph {
  Hypergraph graph;
  std::vector<int> labels;
  double a = 0.0;
  double b = 0.0;

  double mean_degree() const noexcept { return (a + b) / 2.0; }
  double snr() const noexcept { return (a + b) > 0 ? (a - b) / std::sqrt(2.0 * (a + b)) : 0.0; }
};

// Intra/inter rates realising average degree d and SNR xi.
inline std::pair<double, double> sbm_rates(double d, double xi) {
  const double half_gap = xi * std::sqrt(d);
  return {d + half_gap, d - half_gap};
}

namespace detail {

inline std::vector<Tuple> chunk_clones(const std::vector<Vertex>& owners, unsigned p) {
  std::vector<Tuple> groups;
  groups.reserve(owners.size() / p + 1);
  for (std::size_t i = 0; i < owners.size(); i += p) {
    const std::size_t end = std::min(owners.size(), i + p);
    groups.emplace_back(owners.begin() + static_cast<std::ptrdiff_t>(i), owners.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return groups;
}

inline Tuple random_subset(Vertex n, unsigned p, Rng& rng) {
  Tuple t;
  t.reserve(p);
  std::uniform_int_distribution<Vertex> pick(0, n - 1);
  while (t.size() < p) {
    const Vertex v = pick(rng);
    if (std::find(t.begin(), t.end(), v) == t.end()) t.push_back(v);
  }
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace detail

// Edge probability d (p-1)! / n^(p-1) of the Erdos-Renyi p-uniform ensemble.
inline double er_edge_probability(Vertex n, unsigned p, double d) {
  return d * static_cast<double>(factorial(p - 1)) / std::pow(static_cast<double>(n), static_cast<double>(p - 1));
}

// Each p-subset present independently with probability min(1, d (p-1)!/n^(p-1)).
inline Hypergraph gen_er_hypergraph(Vertex n, unsigned p, double d, Rng& rng) {
  if (p < 2) throw std::invalid_argument("gen_er_hypergraph: p must be >= 2");
  if (p > n) throw std::invalid_argument("gen_er_hypergraph: p exceeds n");
  if (!(d >= 0.0)) throw std::invalid_argument("gen_er_hypergraph: d must be non-negative");
  double prob = er_edge_probability(n, p, d);
  const bool clamped = prob > 1.0;
  prob = std::min(prob, 1.0);

  std::vector<Tuple> groups;
  const std::uint64_t total = binomial(n, p);
  const bool enumerate = n <= 64 || (total <= 4'000'000 && prob > 0.25);
  if (prob > 0.0 && enumerate) {
    for_each_subset(n, p, [&](std::span<const Vertex> t) {
      if (prob >= 1.0 || rng.uniform() < prob) groups.emplace_back(t.begin(), t.end());
    });
  } else if (prob > 0.0) {
    std::binomial_distribution<std::uint64_t> count_dist(total, prob);
    const std::uint64_t m = count_dist(rng);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(m * 2);
    groups.reserve(m);
    while (groups.size() < m) {
      Tuple t = detail::random_subset(n, p, rng);
      if (seen.insert(subset_rank(t)).second) groups.push_back(std::move(t));
    }
  }
  Hypergraph g = Hypergraph::from_groups(n, p, false, std::move(groups));
  g.set_probability_clamped(clamped);
  return g;
}

// d-regular p-uniform configuration model: uniform matching of n*d clones into p-groups.
inline Hypergraph gen_configuration_regular(Vertex n, unsigned p, unsigned d, Rng& rng) {
  if (p < 2) throw std::invalid_argument("gen_configuration_regular: p must be >= 2");
  const std::uint64_t slots = static_cast<std::uint64_t>(n) * d;
  if (slots % p != 0) throw std::invalid_argument("gen_configuration_regular: p must divide n*d");
  std::vector<Vertex> owners(slots);
  for (std::uint64_t c = 0; c < slots; ++c) owners[c] = static_cast<Vertex>(c / d);
  std::shuffle(owners.begin(), owners.end(), rng);
  return Hypergraph::from_groups(n, p, true, detail::chunk_clones(owners, p));
}

// Two-step matching on m_red RED and n_blue BLUE balls: group all balls into
// p-blocks, drop blocks touching a BLUE ball, regroup the stranded RED balls.
// RED balls are labelled [0, m_red). Groups come back sorted, in canonical order.
inline std::vector<Tuple> two_stage_partition(std::size_t m_red, std::size_t n_blue, unsigned p, Rng& rng) {
  if (p == 0) throw std::invalid_argument("two_stage_partition: p must be positive");
  if (m_red % p != 0 || (m_red + n_blue) % p != 0)
    throw std::invalid_argument("two_stage_partition: p must divide m_red and m_red + n_blue");
  std::vector<Vertex> balls(m_red + n_blue);
  for (std::size_t i = 0; i < balls.size(); ++i) balls[i] = static_cast<Vertex>(i);
  std::shuffle(balls.begin(), balls.end(), rng);

  std::vector<Tuple> kept;
  std::vector<Vertex> stranded;
  for (std::size_t i = 0; i < balls.size(); i += p) {
    Tuple block(balls.begin() + static_cast<std::ptrdiff_t>(i), balls.begin() + static_cast<std::ptrdiff_t>(i + p));
    if (std::all_of(block.begin(), block.end(), [&](Vertex b) { return b < m_red; })) {
      kept.push_back(std::move(block));
    } else {
      for (Vertex b : block)
        if (b < m_red) stranded.push_back(b);
    }
  }
  std::shuffle(stranded.begin(), stranded.end(), rng);
  for (auto& g : detail::chunk_clones(stranded, p)) kept.push_back(std::move(g));
  for (auto& g : kept) std::sort(g.begin(), g.end());
  std::sort(kept.begin(), kept.end());
  return kept;
}

// Mean clone count per vertex in the Poisson cloning model.
inline double poisson_cloning_mean(Vertex n, unsigned p, double d) {
  return er_edge_probability(n, p, d) * binomial_real(static_cast<double>(n) - 1.0, p - 1);
}

// Poisson cloning: U_i ~ Pois(poisson_cloning_mean) clones per vertex, matched
// uniformly into p-groups with one remainder group of size sum(U) mod p.
inline Hypergraph gen_poisson_cloning(Vertex n, unsigned p, double d, Rng& rng) {
  if (p < 2) throw std::invalid_argument("gen_poisson_cloning: p must be >= 2");
  if (p > n) throw std::invalid_argument("gen_poisson_cloning: p exceeds n");
  if (!(d >= 0.0)) throw std::invalid_argument("gen_poisson_cloning: d must be non-negative");
  const double mean = poisson_cloning_mean(n, p, d);
  std::vector<Vertex> owners;
  if (mean > 0.0) {
    std::poisson_distribution<std::uint32_t> clones(mean);
    for (Vertex i = 0; i < n; ++i) owners.insert(owners.end(), clones(rng), i);
  }
  std::shuffle(owners.begin(), owners.end(), rng);
  return Hypergraph::from_groups(n, p, true, detail::chunk_clones(owners, p));
}

struct TwoStageRegular {
  Hypergraph g1;          // configuration-model sample
  Hypergraph g2;          // all-RED edges of g1 plus the rematched edges
  Hypergraph blue_edges;  // edges of g1 touching a BLUE clone
  Hypergraph rematched;   // new edges over the stranded RED clones
  std::vector<std::uint32_t> blue_counts;  // Z_i
  double poisson_mean = 0.0;
};

// Mean of X_i in the two-stage construction: d - C sqrt(d) log d.
inline double two_stage_poisson_mean(double d, double c) { return d - c * std::sqrt(d) * std::log(d); }

inline TwoStageRegular gen_two_stage_regular(Vertex n, unsigned p, unsigned d, double c, Rng& rng) {
  if (!(c > 0.0)) throw std::invalid_argument("gen_two_stage_regular: C must be positive");
  if (d == 0) throw std::invalid_argument("gen_two_stage_regular: d must be positive");
  const std::uint64_t slots = static_cast<std::uint64_t>(n) * d;
  if (slots % p != 0) throw std::invalid_argument("gen_two_stage_regular: p must divide n*d");
  const double mean = two_stage_poisson_mean(d, c);
  if (mean < 0.0) throw std::invalid_argument("gen_two_stage_regular: d - C sqrt(d) log d is negative");

  TwoStageRegular out;
  out.poisson_mean = mean;
  out.blue_counts.resize(n);
  if (mean > 0.0) {
    std::poisson_distribution<std::uint32_t> pois(mean);
    for (auto& z : out.blue_counts) {
      const std::uint32_t x = pois(rng);
      z = x >= d ? 0 : d - x;
    }
  } else {
    std::fill(out.blue_counts.begin(), out.blue_counts.end(), d);
  }

  // Clone c belongs to vertex c / d and is BLUE iff its index within the vertex is below Z.
  std::vector<std::uint64_t> clones(slots);
  for (std::uint64_t i = 0; i < slots; ++i) clones[i] = i;
  std::shuffle(clones.begin(), clones.end(), rng);
  auto owner = [&](std::uint64_t cl) { return static_cast<Vertex>(cl / d); };
  auto is_blue = [&](std::uint64_t cl) { return (cl % d) < out.blue_counts[cl / d]; };

  std::vector<Tuple> all, red, blue;
  std::vector<Vertex> stranded;
  for (std::uint64_t a = 0; a < slots; a += p) {
    Tuple t;
    bool touches_blue = false;
    for (unsigned k = 0; k < p; ++k) {
      t.push_back(owner(clones[a + k]));
      touches_blue = touches_blue || is_blue(clones[a + k]);
    }
    all.push_back(t);
    if (touches_blue) {
      for (unsigned k = 0; k < p; ++k)
        if (!is_blue(clones[a + k])) stranded.push_back(owner(clones[a + k]));
      blue.push_back(std::move(t));
    } else {
      red.push_back(std::move(t));
    }
  }
  std::shuffle(stranded.begin(), stranded.end(), rng);
  std::vector<Tuple> fresh = detail::chunk_clones(stranded, p);
  std::vector<Tuple> merged = red;
  merged.insert(merged.end(), fresh.begin(), fresh.end());

  out.g1 = Hypergraph::from_groups(n, p, true, std::move(all));
  out.blue_edges = Hypergraph::from_groups(n, p, true, std::move(blue));
  out.rematched = Hypergraph::from_groups(n, p, true, std::move(fresh));
  out.g2 = Hypergraph::from_groups(n, p, true, std::move(merged));
  return out;
}

// Planted bisection: intra-block pairs with probability a/n, inter-block b/n.
inline SbmGraph gen_sbm(Vertex n, double a, double b, Rng& rng) {
  if (n == 0 || n % 2 != 0) throw std::invalid_argument("gen_sbm: n must be even and positive");
  if (!(a >= 0.0) || !(b >= 0.0)) throw std::invalid_argument("gen_sbm: rates must be non-negative");
  if (a > n || b > n) throw std::invalid_argument("gen_sbm: rate exceeds n (probability above one)");
  SbmGraph out;
  out.a = a;
  out.b = b;
  out.labels.resize(n);
  for (Vertex i = 0; i < n; ++i) out.labels[i] = i < n / 2 ? 1 : -1;
  const double p_in = a / n;
  const double p_out = b / n;
  std::vector<Tuple> groups;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      const double prob = out.labels[i] == out.labels[j] ? p_in : p_out;
      if (rng.uniform() < prob) groups.push_back({i, j});
    }
  }
  out.graph = Hypergraph::from_groups(n, 2, false, std::move(groups));
  return out;
}

// ---------------------------------------------------------------------------
// Text format: header `p n m multi`, then m lines of vertex indices in
// canonical order (a multi-edge is written once per copy). The SBM variant
// puts one line of +1/-1 labels right after the header.

inline void write_hypergraph(std::ostream& os, const Hypergraph& g) {
  os << g.p() << ' ' << g.n() << ' ' << g.edge_count() << ' ' << (g.multi() ? 1 : 0) << '\n';
  for (const auto& e : g.edges()) {
    for (std::uint32_t c = 0; c < e.multiplicity; ++c) {
      for (std::size_t k = 0; k < e.vertices.size(); ++k) os << (k ? " " : "") << e.vertices[k];
      os << '\n';
    }
  }
}

namespace detail {

inline Hypergraph read_edges(std::istream& is, unsigned p, Vertex n, std::size_t m, bool multi) {
  std::vector<Tuple> groups;
  groups.reserve(m);
  std::string line;
  while (groups.size() < m && std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    Tuple t;
    long long v;
    while (ls >> v) {
      if (v < 0 || v >= static_cast<long long>(n)) throw std::runtime_error("vertex index out of range: " + line);
      t.push_back(static_cast<Vertex>(v));
    }
    if (t.empty() || t.size() > p) throw std::runtime_error("bad edge line: " + line);
    groups.push_back(std::move(t));
  }
  if (groups.size() != m) throw std::runtime_error("hypergraph file truncated");
  return Hypergraph::from_groups(n, p, multi, std::move(groups));
}

inline std::istream& read_header(std::istream& is, unsigned& p, Vertex& n, std::size_t& m, int& multi) {
  if (!(is >> p >> n >> m >> multi)) throw std::runtime_error("bad hypergraph header");
  std::string rest;
  std::getline(is, rest);
  return is;
}

}  // namespace detail

inline Hypergraph read_hypergraph(std::istream& is) {
  unsigned p;
  Vertex n;
  std::size_t m;
  int multi;
  detail::read_header(is, p, n, m, multi);
  return detail::read_edges(is, p, n, m, multi != 0);
}

inline void write_sbm(std::ostream& os, const SbmGraph& g) {
  os << 2 << ' ' << g.graph.n() << ' ' << g.graph.edge_count() << ' ' << 0 << '\n';
  for (std::size_t i = 0; i < g.labels.size(); ++i) os << (i ? " " : "") << (g.labels[i] > 0 ? "+1" : "-1");
  os << '\n';
  for (const auto& e : g.graph.edges()) os << e.vertices[0] << ' ' << e.vertices[1] << '\n';
}

inline SbmGraph read_sbm(std::istream& is) {
  unsigned p;
  Vertex n;
  std::size_t m;
  int multi;
  detail::read_header(is, p, n, m, multi);
  if (p != 2) throw std::runtime_error("sbm file must have p = 2");
  SbmGraph out;
  out.labels.resize(n);
  for (auto& l : out.labels) {
    if (!(is >> l) || (l != 1 && l != -1)) throw std::runtime_error("bad sbm label line");
  }
  std::string rest;
  std::getline(is, rest);
  out.graph = detail::read_edges(is, 2, n, m, false);
  return out;
}

}  // namespace hyperglass
