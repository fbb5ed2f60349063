#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hyperglass/enumerate.hpp"

using namespace hyperglass;

namespace {

Hypergraph complete_graph(Vertex n) {
  std::vector<Tuple> edges;
  for_each_subset(n, 2, [&](std::span<const Vertex> t) { edges.emplace_back(t.begin(), t.end()); });
  return Hypergraph::from_groups(n, 2, false, edges);
}

WeightTensor random_weights(Vertex n, unsigned p, Rng& rng) {
  std::normal_distribution<double> g;
  WeightTensor w(n, p);
  for_each_subset(n, p, [&](std::span<const Vertex> t) { w.add(Tuple(t.begin(), t.end()), g(rng)); });
  return w;
}

// Plain odometer over q^n, independent of the Gray walk.
double brute_max(const Problem& pr, const ConstraintSet& cs) {
  const Vertex n = pr.n();
  const unsigned q = pr.q();
  std::vector<Spin> s(n, 0);
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    const SpinConfig c(s, q);
    if (cs.contains(c)) best = std::max(best, pr.evaluate(c));
    Vertex i = 0;
    while (i < n && ++s[i] == q) s[i++] = 0;
    if (i == n) break;
  }
  return best;
}

}  // namespace

TEST_CASE("exact_max on small graphs") {
  const Hypergraph k3 = complete_graph(3);
  const SolveResult r = exact_max(Problem::from_hypergraph(k3, Kernel::cut(2)), ConstraintSet::all());
  CHECK(r.value == 4.0);
  CHECK(qcut_value(k3, 2, r.config) == 2);
  CHECK(r.method == "exact");
  CHECK(r.enumerated == 8);

  const Hypergraph k4 = complete_graph(4);
  CHECK(exact_max(Problem::from_hypergraph(k4, Kernel::cut(2)), ConstraintSet::all()).value == 8.0);
  CHECK(exact_max(Problem::from_hypergraph(k4, Kernel::cut(3)), ConstraintSet::all()).value == 10.0);
}

TEST_CASE("exact_max agrees with an odometer enumerator") {
  Rng rng(11);
  for (int rep = 0; rep < 40; ++rep) {
    const unsigned q = 2 + rep % 2;
    const unsigned p = 2 + (rep / 2) % 2;
    const Vertex n = q == 2 ? 9 : 7;
    const WeightTensor w = random_weights(n, p, rng);
    const Kernel k = Kernel::from_function(p, q, [&](std::span<const Spin> a) {
      double s = 0;
      for (Spin x : a) s += x;
      return std::cos(1.0 + s * s);
    });
    const Problem pr = Problem::from_weights(w, k);
    const SolveResult r = exact_max(pr, ConstraintSet::all());
    REQUIRE(r.value == Catch::Approx(brute_max(pr, ConstraintSet::all())).epsilon(1e-12));
    REQUIRE(pr.evaluate(r.config) == r.value);
  }
}

TEST_CASE("exact_max under constraints") {
  Rng rng(12);
  const WeightTensor w = random_weights(8, 2, rng);
  const Problem pr = Problem::from_weights(w, Kernel::cut(2));
  const SolveResult bal = exact_max(pr, ConstraintSet::balanced_bisection());
  CHECK(bal.enumerated == 70);
  CHECK(bal.value == Catch::Approx(brute_max(pr, ConstraintSet::balanced_bisection())).epsilon(1e-12));
  const auto fixed = ConstraintSet::fixed_type_counts({2, 6});
  CHECK(exact_max(pr, fixed).value == Catch::Approx(brute_max(pr, fixed)).epsilon(1e-12));
  CHECK_THROWS_AS(exact_max(pr, ConstraintSet::fixed_type_counts({3, 6})), EmptyConstraintSet);
  CHECK_THROWS_AS(exact_max(pr, ConstraintSet::all(), 100.0), BudgetExceeded);
}

TEST_CASE("XORSAT exact maximum equals the exhaustive satisfied count") {
  Rng rng(13);
  const XorsatInstance inst = gen_xorsat(10, 3, 6.0, rng);
  const SolveResult r = exact_max(Problem::from_xorsat(inst), ConstraintSet::all());
  std::size_t best = 0;
  for (unsigned mask = 0; mask < 1024; ++mask) {
    std::vector<Spin> s(10);
    for (int i = 0; i < 10; ++i) s[i] = (mask >> i) & 1;
    best = std::max(best, xorsat_satisfied(inst, SpinConfig(s, 2)));
  }
  CHECK(xorsat_satisfied(inst, r.config) == best);
  CHECK(inst.clauses.size() / 2.0 + r.value / 2.0 == static_cast<double>(best));
}

TEST_CASE("log_partition limits") {
  Rng rng(14);
  const WeightTensor w = random_weights(8, 2, rng);
  const Problem pr = Problem::from_weights(w, Kernel::cut(3));
  const LogPartition zero = log_partition(pr, ConstraintSet::all(), 0.0);
  CHECK(zero.phi() == Catch::Approx(std::log(3.0)).epsilon(1e-12));
  const LogPartition bal0 = log_partition(Problem::from_weights(w, Kernel::cut(2)), ConstraintSet::balanced_bisection(), 0.0);
  CHECK(bal0.phi() == Catch::Approx(std::log(70.0) / 8).epsilon(1e-12));

  const LogPartition cold = log_partition(pr, ConstraintSet::all(), 1000.0);
  const double mx = exact_max(pr, ConstraintSet::all()).value / 8;
  CHECK(cold.phi_over_beta() >= mx);
  CHECK(cold.phi_over_beta() <= mx + std::log(3.0) / 1000.0);
  CHECK_THROWS(log_partition(pr, ConstraintSet::all(), -1.0));
}

TEST_CASE("log_partition of a single edge matches the closed form") {
  WeightTensor w(2, 2);
  w.add({0, 1}, 0.7);
  const double beta = 1.3;
  const LogPartition lp = log_partition(w, Kernel::cut(2), ConstraintSet::all(), beta);
  // Two aligned states with H = 0, two cut states with H = 2 * 0.7.
  const double z = 2.0 + 2.0 * std::exp(beta * 1.4);
  CHECK(lp.phi() == Catch::Approx(std::log(z) / 2).epsilon(1e-13));
}

TEST_CASE("finite-temperature sandwich") {
  Rng rng(15);
  for (int rep = 0; rep < 20; ++rep) {
    const WeightTensor w = random_weights(7, 3, rng);
    const Problem pr = Problem::from_weights(w, Kernel::parity(3));
    for (double beta : {0.05, 0.5, 3.0, 30.0}) {
      const LogPartition lp = log_partition(pr, ConstraintSet::all(), beta);
      REQUIRE(lp.max_value / 7 <= lp.phi_over_beta());
      REQUIRE(lp.phi_over_beta() <= lp.max_value / 7 + std::log(2.0) / beta);
    }
  }
}

TEST_CASE("entropy derivative check") {
  Rng rng(16);
  const WeightTensor w = random_weights(8, 2, rng);
  const Problem pr = Problem::from_weights(w, Kernel::cut(2));
  const EntropyCheck c = entropy_derivative_check(pr, ConstraintSet::all(), 1.0, 1e-2);
  CHECK(c.error() < 1e-4);
  CHECK(c.order() == Catch::Approx(2.0).margin(0.2));
  CHECK(c.rhs <= 0.0);
  CHECK(c.rhs >= -std::log(2.0));

  const Problem flat(6, Kernel::constant(2, 2, 0.0));
  const EntropyCheck u = entropy_derivative_check(flat, ConstraintSet::all(), 1.0, 1e-2);
  CHECK(u.rhs == Catch::Approx(-std::log(2.0)).epsilon(1e-12));
  CHECK(u.lhs == Catch::Approx(-std::log(2.0)).epsilon(1e-3));
}

TEST_CASE("third derivative check") {
  Rng rng(17);
  const WeightTensor w = random_weights(7, 2, rng);
  const Kernel k = Kernel::cut(2);
  for (double beta : {0.3, 1.0, 2.0}) {
    const ThirdDerivativeCheck c = third_derivative_bound_check(w, k, beta, {1, 4});
    CHECK(std::abs(c.richardson) <= c.bound);
    CHECK(c.richardson == Catch::Approx(c.analytic).epsilon(1e-4).margin(1e-8 * c.bound));
    CHECK(c.bound == Catch::Approx(6 * beta * beta * 8 / 7.0));
  }
  const ThirdDerivativeCheck flat = third_derivative_bound_check(w, k, 0.0, {0, 2});
  CHECK(flat.fd3 == Catch::Approx(0.0).margin(1e-9));
  CHECK(flat.analytic == 0.0);
  CHECK_THROWS(third_derivative_bound_check(w, k, 1.0, {2, 2}));
}
