#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/poisson.hpp>

#include "hyperglass/anneal.hpp"
#include "hyperglass/enumerate.hpp"
#include "hyperglass/gaussian.hpp"
#include "hyperglass/hypergraph.hpp"
#include "hyperglass/kernel.hpp"
#include "hyperglass/objectives.hpp"
#include "hyperglass/parallel.hpp"
#include "hyperglass/problem.hpp"
#include "hyperglass/stats.hpp"

namespace hyperglass {

struct Estimate {
  double mean = 0.0;
  double sem = 0.0;
};

inline Estimate estimate_of(std::span<const double> xs) {
  const auto r = stats::summarize(xs);
  return {r.mean(), r.sem()};
}

// ---------------------------------------------------------------------------
// Interpolation between sparse and Gaussian disorder

// Law of the sparse entries A on distinct tuples. Both have mean d/n^(p-1):
// `bernoulli` puts 1/(p-1)! on an edge present with probability
// d (p-1)!/n^(p-1) (clamped to one); `poisson` uses N/(p-1)! with N Poisson of
// that mean, which also matches the Gaussian variance exactly for every d, n.
enum class EntryLaw { bernoulli, poisson };

struct InterpolationGap {
  Estimate phi1;  // sparse disorder
  Estimate phi2;  // Gaussian disorder
  double gap_over_beta = 0.0;
  double gap_sem = 0.0;
  bool clamped = false;  // Bernoulli probability exceeded one
};

namespace detail {

// u strictly inside (0, 1).
inline double open_uniform(Rng& rng) { return rng.uniform() + 0x1.0p-54; }

}  // namespace detail

// Phi_1 from H_1 = (1/sqrt d) sum A f and Phi_2 from
// H_2 = sum (sqrt d / n^(p-1) + J / n^((p-1)/2)) f over ordered distinct tuples,
// J ~ N(0, 1/(p-1)!). Per replica, each tuple's A and J are driven by the same
// uniform (quantile coupling), so the paired difference has small variance.
inline InterpolationGap interpolation_gap(Vertex n, unsigned p, double d, double beta, const Kernel& kernel,
                                          std::size_t replicas, std::uint64_t seed,
                                          EntryLaw law = EntryLaw::poisson,
                                          const ConstraintSet& cs = ConstraintSet::all()) {
  if (kernel.p() != p) throw std::invalid_argument("kernel arity differs from p");
  if (!(d > 0.0)) throw std::invalid_argument("interpolation_gap needs d > 0");
  if (!(beta >= 0.0)) throw std::invalid_argument("interpolation_gap needs beta >= 0");
  if (replicas < 2) throw std::invalid_argument("interpolation_gap needs at least two replicas");
  InterpolationGap out;
  const double pm1 = static_cast<double>(factorial(p - 1));
  const double pf = static_cast<double>(factorial(p));
  const double rate = d * pm1 / std::pow(static_cast<double>(n), static_cast<double>(p - 1));
  out.clamped = law == EntryLaw::bernoulli && rate > 1.0;
  if (beta == 0.0) {
    // Both free energies equal log|A_n| / n.
    const double phi = std::log(cs.cardinality(n, kernel.q())) / n;
    out.phi1 = out.phi2 = {phi, 0.0};
    return out;
  }
  if (static_cast<double>(n) > 24) throw std::invalid_argument("interpolation_gap enumerates; n must be small");
  const double sqrt_d = std::sqrt(d);
  const double mean_part = sqrt_d / std::pow(static_cast<double>(n), static_cast<double>(p - 1));
  const double noise_scale = std::sqrt(1.0 / pm1) / std::pow(static_cast<double>(n), (p - 1) / 2.0);
  const boost::math::poisson_distribution<
      double, boost::math::policies::policy<boost::math::policies::discrete_quantile<
                  boost::math::policies::integer_round_up>>>
      pois(rate);

  std::vector<double> phi1(replicas), phi2(replicas), diff(replicas);
  parallel_for(replicas, [&](std::size_t r) {
    Rng rng(derive_seed(seed, r));
    Problem h1(n, kernel);
    Problem h2(n, kernel);
    for_each_subset(n, p, [&](std::span<const Vertex> t) {
      const double u = detail::open_uniform(rng);
      double a;
      if (law == EntryLaw::poisson) {
        a = boost::math::quantile(pois, u) / pm1;
      } else {
        a = u < std::min(rate, 1.0) ? 1.0 / pm1 : 0.0;
      }
      const double g = stats::normal_quantile(u);
      if (a != 0.0) h1.add_term(Tuple(t.begin(), t.end()), pf * a / sqrt_d);
      h2.add_term(Tuple(t.begin(), t.end()), pf * (mean_part + noise_scale * g));
    });
    phi1[r] = log_partition(h1, cs, beta).phi();
    phi2[r] = log_partition(h2, cs, beta).phi();
    diff[r] = phi1[r] - phi2[r];
  });
  out.phi1 = estimate_of(phi1);
  out.phi2 = estimate_of(phi2);
  const Estimate dd = estimate_of(diff);
  out.gap_over_beta = std::abs(dd.mean) / beta;
  out.gap_sem = dd.sem / beta;
  return out;
}

// ---------------------------------------------------------------------------
// Order-sqrt(d) coefficient of the sparse optima

enum class SqrtDProblem { qcut, xorsat, sbm_bisection };

inline SqrtDProblem sqrt_d_problem_from(const std::string& s) {
  if (s == "qcut") return SqrtDProblem::qcut;
  if (s == "xorsat") return SqrtDProblem::xorsat;
  if (s == "sbm_bisection") return SqrtDProblem::sbm_bisection;
  throw std::invalid_argument("unknown problem '" + s + "' (qcut, xorsat, sbm_bisection)");
}

struct SqrtDRow {
  double d = 0.0;
  double leading = 0.0;
  double scale = 0.0;
  Estimate value;        // optimum / n
  Estimate coefficient;  // (value - leading) / scale
  bool clamped = false;
};

// Leading term and sqrt(d) scale: q-cut (d/2 (1 - 1/q), sqrt(d)/2); XORSAT
// (d/(2p), sqrt(d/p)/2); SBM bisection (d/4, -sqrt(d)).
inline std::pair<double, double> sqrt_d_terms(SqrtDProblem problem, double d, unsigned arity_or_q) {
  switch (problem) {
    case SqrtDProblem::qcut: return {d / 2.0 * (1.0 - 1.0 / arity_or_q), std::sqrt(d) / 2.0};
    case SqrtDProblem::xorsat: return {d / (2.0 * arity_or_q), 0.5 * std::sqrt(d / arity_or_q)};
    case SqrtDProblem::sbm_bisection: return {d / 4.0, -std::sqrt(d)};
  }
  return {0.0, 1.0};
}

// `arity_or_q` is q for q-cut and p for XORSAT (ignored for SBM); `xi` is the SBM SNR.
inline SqrtDRow sqrt_d_coefficient(SqrtDProblem problem, Vertex n, double d, unsigned arity_or_q, double xi,
                                   std::size_t replicas, const SolverSpec& spec, std::uint64_t seed) {
  if (replicas < 2) throw std::invalid_argument("sqrt_d_coefficient needs at least two replicas");
  SqrtDRow row;
  row.d = d;
  std::tie(row.leading, row.scale) = sqrt_d_terms(problem, d, arity_or_q);
  std::vector<double> values(replicas), coefs(replicas);
  std::vector<char> clamped(replicas, 0);
  parallel_for(replicas, [&](std::size_t r) {
    Rng instance(derive_seed(seed, r, 0));
    Rng solver(derive_seed(seed, r, 1));
    double value = 0.0;
    switch (problem) {
      case SqrtDProblem::qcut: {
        const Hypergraph g = gen_er_hypergraph(n, 2, d, instance);
        clamped[r] = g.probability_clamped();
        const Problem pr = Problem::from_hypergraph(g, Kernel::cut(arity_or_q));
        value = solve(pr, ConstraintSet::all(), spec, solver).value / 2.0;
        break;
      }
      case SqrtDProblem::xorsat: {
        const XorsatInstance inst = gen_xorsat(n, arity_or_q, d, instance);
        const Problem pr = Problem::from_xorsat(inst);
        const SolveResult s = solve(pr, ConstraintSet::all(), spec, solver);
        value = static_cast<double>(xorsat_satisfied(inst, s.config));
        break;
      }
      case SqrtDProblem::sbm_bisection: {
        const auto [a, b] = sbm_rates(d, xi);
        const SbmGraph g = gen_sbm(n, a, b, instance);
        const Problem pr = Problem::from_hypergraph(g.graph, Kernel::cut(2).scaled(-1.0));
        const SolveResult s = solve(pr, ConstraintSet::balanced_bisection(), spec, solver);
        value = static_cast<double>(bisection_cut(g.graph, s.config));
        break;
      }
    }
    values[r] = value / n;
    coefs[r] = (values[r] - row.leading) / row.scale;
  });
  row.value = estimate_of(values);
  row.coefficient = estimate_of(coefs);
  for (char c : clamped) row.clamped = row.clamped || c;
  return row;
}

// ---------------------------------------------------------------------------
// Erdos-Renyi versus regular

struct ErVsRegular {
  Estimate v_er;
  Estimate v_reg;
  Estimate diff;            // V_er - V_reg, paired by replica
  double diff_over_sqrt_d = 0.0;  // |mean diff| / sqrt(d)
  double diff_over_sqrt_d_sem = 0.0;
  bool conditions_hold = false;  // (C1) or (C2) for the kernel
  bool exploratory = false;      // neither holds: no decay is claimed
};

// (C2): interior strongly concave maximiser of Psi. (C1): flat residual at m*.
inline bool equivalence_conditions_hold(const Kernel& kernel) {
  const PsiMaximum pm = psi_max_and_hessian(kernel);
  if (pm.c2_holds) return true;
  const auto r = c1_residual(kernel, pm.m_star);
  double sup = 0.0;
  for (double v : r) sup = std::max(sup, std::abs(v));
  return sup < 1e-8;
}

// V = (1/n) max H on an ER sample and on a configuration-model sample per
// replica; replica r uses streams (seed, r, 0) and (seed, r, 1) for the two
// graphs and (seed, r, 2) for the solver.
inline ErVsRegular er_vs_regular(const Kernel& kernel, Vertex n, unsigned d, std::size_t replicas,
                                 const SolverSpec& spec, std::uint64_t seed) {
  const unsigned p = kernel.p();
  if ((static_cast<std::uint64_t>(n) * d) % p != 0) throw std::invalid_argument("er_vs_regular: p must divide n*d");
  if (replicas < 2) throw std::invalid_argument("er_vs_regular needs at least two replicas");
  ErVsRegular out;
  out.conditions_hold = equivalence_conditions_hold(kernel);
  out.exploratory = !out.conditions_hold;
  std::vector<double> er(replicas), reg(replicas), diff(replicas);
  parallel_for(replicas, [&](std::size_t r) {
    Rng ger(derive_seed(seed, r, 0));
    Rng greg(derive_seed(seed, r, 1));
    Rng solver(derive_seed(seed, r, 2));
    const Hypergraph a = gen_er_hypergraph(n, p, d, ger);
    const Hypergraph b = gen_configuration_regular(n, p, d, greg);
    er[r] = solve(Problem::from_hypergraph(a, kernel), ConstraintSet::all(), spec, solver).value / n;
    reg[r] = solve(Problem::from_hypergraph(b, kernel), ConstraintSet::all(), spec, solver).value / n;
    diff[r] = er[r] - reg[r];
  });
  out.v_er = estimate_of(er);
  out.v_reg = estimate_of(reg);
  out.diff = estimate_of(diff);
  const double root = d > 0 ? std::sqrt(static_cast<double>(d)) : 1.0;
  out.diff_over_sqrt_d = std::abs(out.diff.mean) / root;
  out.diff_over_sqrt_d_sem = out.diff.sem / root;
  return out;
}

// ---------------------------------------------------------------------------
// Concentration of the q-cut optimum

struct ConcentrationRow {
  Vertex n = 0;
  double mean = 0.0;
  double variance = 0.0;
  std::size_t replicas = 0;
};

// V_n = (1/n) max H = 2 MaxCut / n on ER graphs of mean degree d.
inline ConcentrationRow concentration_cell(Vertex n, double d, unsigned q, std::size_t replicas,
                                           const SolverSpec& spec, std::uint64_t seed) {
  if (replicas < 2) throw std::invalid_argument("concentration needs at least two replicas");
  std::vector<double> v(replicas);
  parallel_for(replicas, [&](std::size_t r) {
    Rng instance(derive_seed(seed, r, 0));
    Rng solver(derive_seed(seed, r, 1));
    const Hypergraph g = gen_er_hypergraph(n, 2, d, instance);
    v[r] = solve(Problem::from_hypergraph(g, Kernel::cut(q)), ConstraintSet::all(), spec, solver).value / n;
  });
  const auto s = stats::summarize(v);
  return {n, s.mean(), s.variance(), replicas};
}

inline std::vector<ConcentrationRow> concentration_scan(std::span<const Vertex> grid, double d, unsigned q,
                                                        std::size_t replicas, const SolverSpec& spec,
                                                        std::uint64_t seed) {
  std::vector<ConcentrationRow> rows;
  for (Vertex n : grid) rows.push_back(concentration_cell(n, d, q, replicas, spec, derive_seed(seed, n)));
  return rows;
}

// ---------------------------------------------------------------------------
// Temperature choice

inline double beta_schedule(double d, double delta) {
  if (!(d >= 1.0)) throw std::domain_error("beta_schedule needs d >= 1");
  if (!(delta > 0.0 && delta < 0.25)) throw std::domain_error("beta_schedule needs 0 < delta < 1/4");
  return std::pow(d, 0.25 - delta);
}

// D beta^2 / sqrt(d) + 2 log q / beta at beta = d^(1/4 - delta).
inline double combined_bound(double d, double delta, double big_d, unsigned q) {
  const double beta = beta_schedule(d, delta);
  return big_d * beta * beta / std::sqrt(d) + 2.0 * std::log(static_cast<double>(q)) / beta;
}

}  // namespace hyperglass
