#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "hyperglass/gaussian.hpp"

using namespace hyperglass;

namespace {

// Sample variance of one entry over independent draws, with its standard error.
std::pair<double, double> entry_variance(unsigned p, Tuple t, bool pisum, int samples) {
  Rng rng(derive_seed(41, p, pisum));
  stats::Running r;
  for (int i = 0; i < samples; ++i) {
    const GaussianTensor j = pisum ? gen_standard_symmetric_tensor_pisum(p + 1, p, rng, true)
                                   : gen_standard_symmetric_tensor(p + 1, p, rng, true);
    const double x = j.at(t);
    r.add(x * x);
  }
  return {r.mean(), r.sem()};
}

}  // namespace

TEST_CASE("standard symmetric tensor variances") {
  for (bool pisum : {false, true}) {
    const auto [v2, s2] = entry_variance(2, {0, 1}, pisum, 20000);
    CHECK(std::abs(v2 - 1.0) < 4 * s2);
    const auto [v3, s3] = entry_variance(3, {0, 1, 2}, pisum, 20000);
    CHECK(std::abs(v3 - 0.5) < 4 * s3);
    // Diagonal of the p = 2 tensor: 2 * 2! / 2! = 2.
    const auto [d2, sd] = entry_variance(2, {1, 1}, pisum, 20000);
    CHECK(std::abs(d2 - 2.0) < 4 * sd);
  }
}

TEST_CASE("symmetric storage") {
  Rng rng(42);
  const GaussianTensor j = gen_standard_symmetric_tensor(5, 3, rng);
  CHECK(j.at({1, 0, 2}) == j.at({0, 1, 2}));
  CHECK(j.at({2, 1, 0}) == j.at({0, 1, 2}));
  CHECK(j.at({1, 1, 2}) == 0.0);
  GaussianTensor k = j;
  CHECK_THROWS(k.set({1, 1, 2}, 1.0));
  CHECK_THROWS(j.at({0, 1}));
  CHECK_THROWS(GaussianTensor(2, 3, TensorMode::iid_array, false));
  const GaussianTensor neg = j.scaled(-1.0);
  CHECK(neg.at({0, 3, 4}) == -j.at({0, 3, 4}));
}

TEST_CASE("GOE variances") {
  Rng rng(43);
  stats::Running diag, off;
  for (int i = 0; i < 20000; ++i) {
    const GoeMatrix g = gen_goe(3, rng);
    diag.add(g(1, 1) * g(1, 1));
    off.add(g(0, 2) * g(0, 2));
    REQUIRE(g(0, 2) == g(2, 0));
  }
  CHECK(std::abs(diag.mean() - 2.0) < 4 * diag.sem());
  CHECK(std::abs(off.mean() - 1.0) < 4 * off.sem());
}

TEST_CASE("surrogate T: zero kernel and the recombined objective") {
  Rng rng(44);
  const GaussianTensor j = gen_standard_symmetric_tensor(10, 2, rng);
  const SurrogateTable zero = surrogate_T(j, Kernel::constant(2, 2, 0.0));
  for (const auto& l : zero.levels) CHECK(l.value == 0.0);

  const Kernel cut = Kernel::cut(2);
  const SurrogateTable t = surrogate_T(j, cut);
  CHECK(t.levels.size() == 11);
  const Problem random_part = gaussian_problem(j, cut);
  for (double d : {4.0, 16.0}) {
    double best = -1e300;
    for (unsigned mask = 0; mask < 1024; ++mask) {
      std::vector<Spin> s(10);
      std::size_t ones = 0;
      for (int i = 0; i < 10; ++i) ones += s[i] = (mask >> i) & 1;
      // Ordered distinct pairs with different labels, over n^(p-1).
      const double deterministic = 2.0 * ones * (10 - ones) / 10.0;
      best = std::max(best, d * deterministic + std::sqrt(d) * random_part.evaluate(SpinConfig(s, 2)));
    }
    CHECK(t.combined(d) == Catch::Approx(best / 10).epsilon(1e-12));
  }
  CHECK(t.unconstrained() >= t.at_alpha(0.5));
  CHECK(std::isinf(t.at_alpha(7.0)));
}

TEST_CASE("surrogate T is invariant in law under J -> -J") {
  std::vector<double> plus, minus;
  Rng rng(45);
  for (int r = 0; r < 200; ++r) {
    plus.push_back(surrogate_T(gen_standard_symmetric_tensor(8, 2, rng), Kernel::cut(2)).unconstrained());
    minus.push_back(surrogate_T(gen_standard_symmetric_tensor(8, 2, rng).scaled(-1.0), Kernel::cut(2)).unconstrained());
  }
  CHECK(stats::ks_two_sample(plus, minus).p_value > 0.01);
}

TEST_CASE("surrogate S on balanced levels shifts T by a computable constant") {
  Rng rng(46);
  const Vertex n = 8;
  const GaussianTensor j = gen_standard_symmetric_tensor(n, 2, rng);
  const Kernel cut = Kernel::cut(2);
  const SurrogateTable t = surrogate_T(j, cut);
  const SurrogateTable s = surrogate_S(j, cut);
  const auto g = surrogate_g(j);
  double sum_g = 0.0;
  for (double x : g) sum_g += x;
  const double weight = 2.0 / n;
  for (std::size_t i = 0; i < t.levels.size(); ++i) {
    if (t.levels[i].counts[0] != n / 2) continue;
    // Each label sees n/2 distinct partners with the other label.
    CHECK(s.levels[i].value == Catch::Approx(t.levels[i].value - weight * (n / 2.0) * sum_g / n).epsilon(1e-12));
  }
  CHECK(surrogate_S(j, Kernel::constant(2, 2, 0.0)).unconstrained() == 0.0);
}

TEST_CASE("surrogate S matches a naive double loop") {
  Rng rng(47);
  const Vertex n = 8;
  const GaussianTensor j = gen_standard_symmetric_tensor(n, 2, rng);
  const Kernel k = Kernel::from_function(2, 2, [](std::span<const Spin> a) { return a[0] == 0 && a[1] == 0 ? 1.0 : 0.2; });
  const SurrogateTable s = surrogate_S(j, k);
  const auto g = surrogate_g(j);
  std::vector<double> best(n + 1, -1e300);
  for (unsigned mask = 0; mask < 256; ++mask) {
    std::vector<Spin> sp(n);
    std::size_t ones = 0;
    for (Vertex i = 0; i < n; ++i) ones += sp[i] = (mask >> i) & 1;
    double v = 0.0;
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = 0; b < n; ++b) {
        if (a == b) continue;
        const Spin args[] = {sp[a], sp[b]};
        v += j.at({a, b}) * k(args) / std::sqrt(double(n)) - (2.0 / n) * g[a] * k(args);
      }
    best[n - ones] = std::max(best[n - ones], v / n);
  }
  for (const auto& l : s.levels) CHECK(l.value == Catch::Approx(best[l.counts[0]]).epsilon(1e-10));
}

TEST_CASE("p-spin covariance structure") {
  const Vertex n = 4;
  const std::vector<int> a = {1, 1, 1, 1}, b = {1, 1, -1, 1}, c = {1, -1, -1, 1};
  for (unsigned p : {2u, 3u}) {
    stats::Running aa, ab, ac;
    Rng rng(derive_seed(48, p));
    for (int r = 0; r < 40000; ++r) {
      const IsingModel m = pspin_model(n, p, rng);
      const double ha = m.energy(a), hb = m.energy(b), hc = m.energy(c);
      aa.add(ha * ha);
      ab.add(ha * hb);
      ac.add(ha * hc);
    }
    CHECK(std::abs(aa.mean() - n) < 4 * aa.sem());
    CHECK(std::abs(ab.mean() - n * std::pow(0.5, p)) < 4 * ab.sem());
    CHECK(std::abs(ac.mean() - 0.0) < 4 * ac.sem());
  }
  Rng rng(49);
  CHECK_THROWS(pspin_model(1, 2, rng));
}

TEST_CASE("p-spin ground state at n = 2 has a closed form") {
  SolverSpec exact;
  exact.kind = SolverKind::exact;
  // max = (G11 + G22 + |G12 + G21|) / sqrt 2, so E max / n = sqrt(2/pi) / 2.
  const MonteCarloEstimate e = pspin_ground_state(2, 2, exact, 20000, 50);
  CHECK(std::abs(e.mean - std::sqrt(2.0 / std::numbers::pi) / 2) < 4 * e.sem);
  CHECK(e.values.size() == 20000);
  CHECK_THROWS(pspin_ground_state(2, 2, exact, 1, 50));
}

TEST_CASE("p-spin ground state: exact and annealed agree at small n") {
  SolverSpec exact;
  exact.kind = SolverKind::exact;
  SolverSpec anneal;
  anneal.kind = SolverKind::anneal_ising;
  anneal.schedule.sweeps = 2000;
  const auto a = pspin_ground_state(14, 2, exact, 16, 51);
  const auto b = pspin_ground_state(14, 2, anneal, 16, 51);
  for (std::size_t r = 0; r < 16; ++r) CHECK(b.values[r] == Catch::Approx(a.values[r]).epsilon(1e-9));
}

TEST_CASE("SBM surrogate") {
  SolverSpec exact;
  exact.kind = SolverKind::exact;
  const auto bal = sbm_surrogate(12, 1.0, true, exact, 32, 52);
  const auto all = sbm_surrogate(12, 1.0, false, exact, 32, 52);
  for (std::size_t r = 0; r < 32; ++r) CHECK(all.values[r] >= bal.values[r] - 1e-12);

  // n = 2: the two balanced states give xi + (J11 + J22 - 2 J12) / (2 sqrt 2).
  const auto two = sbm_surrogate(2, 0.7, true, exact, 8, 53);
  for (std::size_t r = 0; r < 8; ++r) {
    Rng disorder(derive_seed(53, r, 0));
    const GoeMatrix j = gen_goe(2, disorder);
    CHECK(two.values[r] == Catch::Approx(0.7 + (j(0, 0) + j(1, 1) - 2 * j(0, 1)) / (2 * std::sqrt(2.0))).epsilon(1e-12));
  }
  CHECK_THROWS(sbm_surrogate(5, 1.0, true, exact, 4, 1));
}

TEST_CASE("SBM surrogate: balanced gap shrinks with n at xi = 0") {
  SolverSpec spec;
  spec.kind = SolverKind::anneal_ising;
  spec.schedule.sweeps = 1000;
  spec.schedule.restarts = 4;
  auto gap = [&](Vertex n) {
    const auto bal = sbm_surrogate(n, 0.0, true, spec, 200, derive_seed(54, n));
    const auto all = sbm_surrogate(n, 0.0, false, spec, 200, derive_seed(54, n));
    std::vector<double> diff(200);
    for (std::size_t r = 0; r < 200; ++r) diff[r] = all.values[r] - bal.values[r];
    return stats::summarize(diff);
  };
  const auto small = gap(12), large = gap(24);
  const double z = (small.mean() - large.mean()) / std::hypot(small.sem(), large.sem());
  CHECK(z > 1.645);
}

TEST_CASE("extrapolation scan is reproducible") {
  SolverSpec spec;
  spec.kind = SolverKind::anneal_ising;
  spec.schedule.sweeps = 200;
  spec.schedule.restarts = 1;
  const std::vector<Vertex> grid = {16, 24, 32};
  const GroundStateScan a = pspin_extrapolate(grid, 2, spec, 4, 55);
  const GroundStateScan b = pspin_extrapolate(grid, 2, spec, 4, 55);
  CHECK(a.extrapolated.value == b.extrapolated.value);
  CHECK(a.estimates.size() == 3);
}
