#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "hyperglass/objectives.hpp"
#include "hyperglass/problem.hpp"

using namespace hyperglass;

namespace {

SpinConfig random_config(Vertex n, unsigned q, Rng& rng) {
  std::vector<Spin> s(n);
  for (auto& x : s) x = static_cast<Spin>(rng() % q);
  return SpinConfig(std::move(s), q);
}

Kernel random_kernel(unsigned p, unsigned q, Rng& rng) {
  std::normal_distribution<double> g;
  std::map<std::vector<Spin>, double> v;
  return Kernel::from_function(p, q, [&](std::span<const Spin> a) {
    auto [it, fresh] = v.try_emplace(std::vector<Spin>(a.begin(), a.end()), 0.0);
    if (fresh) it->second = g(rng);
    return it->second;
  });
}

}  // namespace

TEST_CASE("kernel tables are symmetric under argument permutations") {
  Rng rng(1);
  const Kernel k = random_kernel(3, 3, rng);
  for (int t = 0; t < 1000; ++t) {
    std::vector<Spin> a = {static_cast<Spin>(rng() % 3), static_cast<Spin>(rng() % 3), static_cast<Spin>(rng() % 3)};
    std::vector<Spin> b = a;
    std::shuffle(b.begin(), b.end(), rng);
    REQUIRE(k(a) == k(b));
  }
  CHECK(Kernel::cut(3).label_symmetric());
  CHECK_FALSE(Kernel::single_label(3, 0).label_symmetric());
}

TEST_CASE("spin encoding: 0 is +1 and 1 is -1") {
  CHECK(spin_sign(0) == 1);
  CHECK(spin_sign(1) == -1);
  CHECK(spin_from_sign(-1) == 1);
  const Kernel x = Kernel::parity(2);
  const Spin pp[] = {0, 0}, pm[] = {0, 1};
  CHECK(x(pp) == 1.0);
  CHECK(x(pm) == -1.0);
  CHECK_THROWS(SpinConfig({0, 3}, 3));
}

TEST_CASE("hamiltonian: single edge by hand") {
  WeightTensor w(2, 2);
  w.add({0, 1}, 1.0);
  CHECK(hamiltonian(w, Kernel::cut(2), SpinConfig({0, 1}, 2)) == 2.0);
  CHECK(hamiltonian(w, Kernel::cut(2), SpinConfig({1, 1}, 2)) == 0.0);
  CHECK_THROWS(hamiltonian(w, Kernel::cut(2), SpinConfig({0, 1, 0}, 2)));
}

TEST_CASE("hamiltonian equals a triple loop over ordered tuples") {
  Rng rng(2);
  std::normal_distribution<double> g;
  const Kernel k = random_kernel(3, 2, rng);
  WeightTensor w(6, 3);
  for_each_subset(6, 3, [&](std::span<const Vertex> t) { w.add(Tuple(t.begin(), t.end()), g(rng)); });
  for (int rep = 0; rep < 20; ++rep) {
    const SpinConfig s = random_config(6, 2, rng);
    double naive = 0.0;
    for (Vertex i = 0; i < 6; ++i)
      for (Vertex j = 0; j < 6; ++j)
        for (Vertex l = 0; l < 6; ++l) {
          if (i == j || j == l || i == l) continue;
          const Spin a[] = {s.spins[i], s.spins[j], s.spins[l]};
          naive += w.at({i, j, l}) * k(a);
        }
    CHECK(hamiltonian(w, k, s) == Catch::Approx(naive).epsilon(1e-12));
  }
}

TEST_CASE("q-cut value: hand counts and H = 2 cut") {
  const Hypergraph edge = Hypergraph::from_groups(2, 2, false, {{0, 1}});
  CHECK(qcut_value(edge, 2, SpinConfig({0, 1}, 2)) == 1);
  std::vector<Tuple> k4;
  for_each_subset(4, 2, [&](std::span<const Vertex> t) { k4.emplace_back(t.begin(), t.end()); });
  const Hypergraph complete = Hypergraph::from_groups(4, 2, false, k4);
  CHECK(qcut_value(complete, 2, SpinConfig({0, 0, 1, 1}, 2)) == 4);

  Rng rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    const unsigned q = 2 + rep % 3;
    const Hypergraph g = gen_er_hypergraph(12, 2, 4.0, rng);
    const SpinConfig s = random_config(12, q, rng);
    const double h = hamiltonian(WeightTensor::adjacency(g), Kernel::cut(q), s);
    REQUIRE(h == 2.0 * static_cast<double>(qcut_value(g, q, s)));
    REQUIRE(Problem::from_hypergraph(g, Kernel::cut(q)).evaluate(s) == h);
  }
}

TEST_CASE("adjacency hamiltonian is p times the edge sum on simple hypergraphs") {
  Rng rng(4);
  const Kernel k = random_kernel(3, 3, rng);
  for (int rep = 0; rep < 20; ++rep) {
    const Hypergraph g = gen_er_hypergraph(9, 3, 3.0, rng);
    const SpinConfig s = random_config(9, 3, rng);
    double edge_sum = 0.0;
    for (const auto& e : g.edges()) {
      const Spin a[] = {s.spins[e.vertices[0]], s.spins[e.vertices[1]], s.spins[e.vertices[2]]};
      edge_sum += k(a);
    }
    CHECK(hamiltonian(WeightTensor::adjacency(g), k, s) == Catch::Approx(3.0 * edge_sum).margin(1e-12));
  }
}

TEST_CASE("XORSAT counts and the m/2 + H/2 identity") {
  XorsatInstance one{2, 2, {{{0, 1}, 1}}};
  CHECK(xorsat_satisfied(one, SpinConfig({0, 0}, 2)) == 1);

  Rng rng(5);
  for (unsigned p : {2u, 3u}) {
    XorsatInstance inst{10, p, {}};
    for (int a = 0; a < 20; ++a) {
      Tuple t;
      while (t.size() < p) {
        const Vertex v = static_cast<Vertex>(rng() % 10);
        if (std::find(t.begin(), t.end(), v) == t.end()) t.push_back(v);
      }
      std::sort(t.begin(), t.end());
      inst.clauses.push_back({t, (rng() & 1) ? -1 : 1});
    }
    const Problem pr = Problem::from_xorsat(inst);
    std::size_t best_count = 0;
    double best_identity = -1e300;
    for (unsigned mask = 0; mask < 1024; ++mask) {
      std::vector<Spin> s(10);
      for (int i = 0; i < 10; ++i) s[i] = (mask >> i) & 1;
      const SpinConfig sigma(s, 2);
      std::vector<Spin> flipped(10);
      for (int i = 0; i < 10; ++i) flipped[i] = 1 - s[i];
      const std::size_t c = xorsat_satisfied(inst, sigma);
      const std::size_t cf = xorsat_satisfied(inst, SpinConfig(flipped, 2));
      REQUIRE(2.0 * c == 20.0 + pr.evaluate(sigma));
      if (p % 2 == 0) REQUIRE(c == cf);
      else REQUIRE(c + cf == 20);
      best_count = std::max(best_count, c);
      best_identity = std::max(best_identity, 10.0 + pr.evaluate(sigma) / 2.0);
    }
    CHECK(static_cast<double>(best_count) == best_identity);
  }
}

TEST_CASE("XORSAT text format round trip") {
  Rng rng(6);
  const XorsatInstance inst = gen_xorsat(10, 3, 12.0, rng);
  std::stringstream ss;
  write_xorsat(ss, inst);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "3 10 " + std::to_string(inst.clauses.size()));
  ss.seekg(0);
  const XorsatInstance back = read_xorsat(ss);
  CHECK(back.clauses == inst.clauses);
  std::stringstream bad("3 4 1\n2 0 1 2\n");
  CHECK_THROWS(read_xorsat(bad));
}

TEST_CASE("bisection cut") {
  const Hypergraph path = Hypergraph::from_groups(4, 2, false, {{0, 1}, {1, 2}, {2, 3}});
  const int signs[] = {1, 1, -1, -1};
  CHECK(bisection_cut(path, SpinConfig::from_signs(signs)) == 1);
  const int unbalanced[] = {1, 1, 1, -1};
  CHECK_THROWS_AS(bisection_cut(path, SpinConfig::from_signs(unbalanced)), std::invalid_argument);
}

TEST_CASE("balanced identity over ordered pairs") {
  Rng rng(7);
  for (Vertex n = 4; n <= 20; n += 2) {
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<int> s(n, 1);
      std::fill(s.begin() + n / 2, s.end(), -1);
      std::shuffle(s.begin(), s.end(), rng);
      std::size_t total = 0;
      for (Vertex i = 0; i < n; ++i)
        for (Vertex j = 0; j < n; ++j) total += s[i] != s[j];
      REQUIRE(2 * total == static_cast<std::size_t>(n) * n);
    }
  }
}

TEST_CASE("psi values") {
  const std::vector<double> third(3, 1.0 / 3);
  CHECK(psi(Kernel::cut(3), third) == Catch::Approx(2.0 / 3));
  const std::vector<double> corner = {1, 0, 0};
  CHECK(psi(Kernel::cut(3), corner) == 0.0);
  const std::vector<double> half = {0.5, 0.5};
  CHECK(psi(Kernel::parity(3), half) == Catch::Approx(0.0).margin(1e-15));
  const std::vector<double> off = {0.5, 0.6};
  CHECK_THROWS_AS(psi(Kernel::cut(2), off), std::invalid_argument);
  const std::vector<double> m = {0.2, 0.5, 0.3}, pm = {0.3, 0.2, 0.5};
  CHECK(psi(Kernel::cut(3), m) == Catch::Approx(psi(Kernel::cut(3), pm)));
}

TEST_CASE("psi derivatives match finite differences") {
  Rng rng(8);
  const Kernel k = random_kernel(3, 3, rng);
  const std::vector<double> m = {0.2, 0.3, 0.5};
  // Psi-bar(x, y) = Psi(x, y, 1 - x - y).
  auto bar = [&](double x, double y) {
    const std::vector<double> v = {x, y, 1 - x - y};
    return psi(k, v);
  };
  const double h = 1e-4;
  const auto hb = psi_bar_hessian(k, m);
  const double dxx = (bar(0.2 + h, 0.3) - 2 * bar(0.2, 0.3) + bar(0.2 - h, 0.3)) / (h * h);
  const double dxy = (bar(0.2 + h, 0.3 + h) - bar(0.2 + h, 0.3 - h) - bar(0.2 - h, 0.3 + h) + bar(0.2 - h, 0.3 - h)) /
                     (4 * h * h);
  CHECK(hb(0, 0) == Catch::Approx(dxx).epsilon(1e-5));
  CHECK(hb(0, 1) == Catch::Approx(dxy).epsilon(1e-5));
  const auto g = psi_gradient(k, m);
  const double dx = (bar(0.2 + h, 0.3) - bar(0.2 - h, 0.3)) / (2 * h);
  CHECK(g[0] - g[2] == Catch::Approx(dx).epsilon(1e-6));
}

TEST_CASE("psi maximum for the cut kernel") {
  const PsiMaximum two = psi_max_and_hessian(Kernel::cut(2));
  CHECK(two.m_star[0] == Catch::Approx(0.5).margin(1e-8));
  CHECK(two.value == Catch::Approx(0.5).margin(1e-12));
  // Psi-bar(x) = 2 x (1 - x), so -Psi-bar'' = 4 = 2 (I + 11^T) in one coordinate.
  CHECK(two.min_eigenvalue == Catch::Approx(4.0).margin(1e-8));
  CHECK(two.c2_holds);

  const PsiMaximum four = psi_max_and_hessian(Kernel::cut(4));
  CHECK(four.value == Catch::Approx(0.75).margin(1e-10));
  for (double x : four.m_star) CHECK(x == Catch::Approx(0.25).margin(1e-6));
  CHECK(four.projected_gradient_norm < 1e-8);
  // 2 (I + 11^T) has smallest eigenvalue 2.
  CHECK(four.min_eigenvalue == Catch::Approx(2.0).margin(1e-6));
  const auto r = c1_residual(Kernel::cut(4), four.m_star);
  for (double v : r) CHECK(std::abs(v) < 1e-8);
}

TEST_CASE("constant kernel fails (C2)") {
  const PsiMaximum c = psi_max_and_hessian(Kernel::constant(2, 3, 1.5));
  CHECK(c.value == Catch::Approx(1.5));
  CHECK(c.min_eigenvalue == Catch::Approx(0.0).margin(1e-9));
  CHECK_FALSE(c.c2_holds);
}

TEST_CASE("single-label kernel has a boundary maximiser") {
  const PsiMaximum c = psi_max_and_hessian(Kernel::single_label(3, 0));
  CHECK(c.value == Catch::Approx(1.0));
  CHECK_FALSE(c.interior);
  CHECK_FALSE(c.c2_holds);
}

TEST_CASE("C1 residual") {
  const SpinConfig balanced({0, 1, 2, 0, 1, 2}, 3);
  for (double v : c1_residual(Kernel::cut(3), balanced)) CHECK(v == Catch::Approx(0.0).margin(1e-15));
  // XOR kernel p = 2 with magnetisation mu: r = (mu, -mu).
  const SpinConfig s({0, 0, 0, 1}, 2);
  const auto r = c1_residual(Kernel::parity(2), s);
  CHECK(r[0] == Catch::Approx(0.5));
  CHECK(r[1] == Catch::Approx(-0.5));

  Rng rng(9);
  const Kernel k = random_kernel(3, 3, rng);
  for (int rep = 0; rep < 10; ++rep) {
    const SpinConfig sigma = random_config(8, 3, rng);
    const auto m = sigma.fractions();
    std::vector<double> naive(3, 0.0);
    for (Spin j = 0; j < 3; ++j)
      for (Spin a = 0; a < 3; ++a)
        for (Spin b = 0; b < 3; ++b) {
          const Spin args[] = {j, a, b};
          naive[j] += k(args) * m[a] * m[b];
        }
    const double eta = (naive[0] + naive[1] + naive[2]) / 3;
    const auto got = c1_residual(k, sigma);
    for (int j = 0; j < 3; ++j) CHECK(got[j] == Catch::Approx(naive[j] - eta).margin(1e-14));
  }
}

TEST_CASE("weight tensor canonicalises tuples") {
  WeightTensor w(5, 3);
  w.add({4, 0, 2}, 1.5);
  w.add({2, 4, 0}, 0.5);
  CHECK(w.at({0, 2, 4}) == 2.0);
  CHECK(w.entries().size() == 1);
  CHECK(w.max_abs() == 2.0);
  CHECK_THROWS(w.add({1, 1, 2}, 1.0));
  CHECK_THROWS(w.add({1, 2}, 1.0));
}
