#include <catch_amalgamated.hpp>

#include <cmath>

#include "hyperglass/experiments.hpp"

using namespace hyperglass;

TEST_CASE("interpolation gap at beta = 0 is exactly zero") {
  const InterpolationGap g = interpolation_gap(10, 2, 16.0, 0.0, Kernel::cut(2), 4, 1);
  CHECK(g.gap_over_beta == 0.0);
  CHECK(g.phi1.mean == g.phi2.mean);
  CHECK(g.phi1.mean == Catch::Approx(std::log(2.0)));
  CHECK_THROWS(interpolation_gap(10, 2, 16.0, 1.0, Kernel::cut(2), 1, 1));
  CHECK_THROWS(interpolation_gap(10, 3, 16.0, 1.0, Kernel::cut(2), 4, 1));
}

TEST_CASE("interpolation gap is reproducible and flags Bernoulli clamping") {
  const InterpolationGap a = interpolation_gap(8, 2, 16.0, 1.0, Kernel::cut(2), 8, 7);
  const InterpolationGap b = interpolation_gap(8, 2, 16.0, 1.0, Kernel::cut(2), 8, 7);
  CHECK(a.gap_over_beta == b.gap_over_beta);
  CHECK(a.phi1.mean == b.phi1.mean);
  CHECK_FALSE(a.clamped);
  const InterpolationGap c = interpolation_gap(8, 2, 16.0, 1.0, Kernel::cut(2), 4, 7, EntryLaw::bernoulli);
  CHECK(c.clamped);
  CHECK(std::isfinite(c.gap_over_beta));
}

TEST_CASE("interpolation gap grows with beta no faster than beta squared") {
  std::vector<double> betas = {0.5, 1.0, 2.0}, gaps;
  for (double beta : betas) {
    const InterpolationGap g = interpolation_gap(8, 2, 64.0, beta, Kernel::cut(2), 256, 8);
    gaps.push_back(g.gap_over_beta * beta);
  }
  CHECK(stats::loglog_slope(betas, gaps) <= 2.5);
}

TEST_CASE("sqrt-d leading terms and scales") {
  auto [l1, s1] = sqrt_d_terms(SqrtDProblem::qcut, 16.0, 2);
  CHECK(l1 == 4.0);
  CHECK(s1 == 2.0);
  auto [l3, s3] = sqrt_d_terms(SqrtDProblem::qcut, 16.0, 3);
  CHECK(l3 == Catch::Approx(16.0 / 3));
  auto [lx, sx] = sqrt_d_terms(SqrtDProblem::xorsat, 12.0, 3);
  CHECK(lx == 2.0);
  CHECK(sx == 1.0);
  auto [ls, ss] = sqrt_d_terms(SqrtDProblem::sbm_bisection, 16.0, 2);
  CHECK(ls == 4.0);
  CHECK(ss == -4.0);
  CHECK(sqrt_d_problem_from("xorsat") == SqrtDProblem::xorsat);
  CHECK_THROWS(sqrt_d_problem_from("maxsat"));
}

TEST_CASE("XORSAT clause density matches d/(2p)") {
  const Vertex n = 30;
  const unsigned p = 3;
  const double d = 6.0;
  stats::Running m;
  for (int seed = 0; seed < 100; ++seed) {
    Rng rng(derive_seed(61, seed));
    m.add(static_cast<double>(gen_xorsat(n, p, d, rng).clauses.size()) / (2.0 * n));
  }
  // E m = C(n, p) d (p-1)! / n^(p-1).
  const double expected = binomial_real(n, p) * d * 2.0 / (n * n) / (2.0 * n);
  CHECK(std::abs(m.mean() - expected) < 3 * m.sem());
  CHECK(expected == Catch::Approx(d / (2.0 * p) * (n - 1) * (n - 2) / (n * n)));
}

TEST_CASE("SBM bisection sits below d/4") {
  SolverSpec spec;
  spec.schedule.sweeps = 2000;
  spec.schedule.restarts = 2;
  for (double d : {16.0, 32.0}) {
    const SqrtDRow row = sqrt_d_coefficient(SqrtDProblem::sbm_bisection, 100, d, 2, 1.0, 4, spec, 62);
    CHECK(row.value.mean < d / 4);
    CHECK(row.coefficient.mean > 0.0);
  }
}

TEST_CASE("q-cut coefficient on a small graph is reproducible") {
  SolverSpec spec;
  const SqrtDRow a = sqrt_d_coefficient(SqrtDProblem::qcut, 16, 4.0, 2, 1.0, 4, spec, 63);
  const SqrtDRow b = sqrt_d_coefficient(SqrtDProblem::qcut, 16, 4.0, 2, 1.0, 4, spec, 63);
  CHECK(a.value.mean == b.value.mean);
  CHECK(a.coefficient.mean == Catch::Approx((a.value.mean - 1.0) / 1.0));
}

TEST_CASE("ER versus regular") {
  SolverSpec spec;
  const ErVsRegular zero = er_vs_regular(Kernel::cut(2), 12, 0, 4, spec, 64);
  CHECK(zero.v_er.mean == 0.0);
  CHECK(zero.v_reg.mean == 0.0);
  CHECK(zero.conditions_hold);
  CHECK_FALSE(zero.exploratory);
  CHECK_THROWS(er_vs_regular(Kernel::parity(3), 10, 1, 4, spec, 64));
  const ErVsRegular single = er_vs_regular(Kernel::single_label(2, 0), 12, 3, 4, spec, 64);
  CHECK(single.exploratory);
  const ErVsRegular small = er_vs_regular(Kernel::cut(2), 12, 3, 8, spec, 64);
  CHECK(small.diff.mean == Catch::Approx(small.v_er.mean - small.v_reg.mean));
  CHECK(small.diff_over_sqrt_d == Catch::Approx(std::abs(small.diff.mean) / std::sqrt(3.0)));
}

TEST_CASE("concentration on a deterministic instance has zero variance") {
  SolverSpec spec;
  const ConcentrationRow r = concentration_cell(8, 100.0, 2, 4, spec, 65);
  CHECK(r.variance == 0.0);
  CHECK(r.mean == Catch::Approx(2.0 * 16 / 8));
  const std::vector<Vertex> grid = {8, 12};
  const auto rows = concentration_scan(grid, 4.0, 2, 8, spec, 66);
  CHECK(rows.size() == 2);
  CHECK(rows[1].n == 12);
}

TEST_CASE("beta schedule and combined bound") {
  CHECK(beta_schedule(16.0, 0.125) == Catch::Approx(std::sqrt(2.0)));
  CHECK(beta_schedule(1.0, 0.2) == 1.0);
  CHECK(beta_schedule(1.0, 0.01) == 1.0);
  CHECK_THROWS_AS(beta_schedule(0.5, 0.1), std::domain_error);
  CHECK_THROWS_AS(beta_schedule(16.0, 0.25), std::domain_error);
  const double b16 = combined_bound(16, 0.125, 1, 2);
  const double b256 = combined_bound(256, 0.125, 1, 2);
  const double b4096 = combined_bound(4096, 0.125, 1, 2);
  CHECK(b16 > b256);
  CHECK(b256 > b4096);
}
