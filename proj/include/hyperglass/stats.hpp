#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>

namespace hyperglass::stats {

// Welford accumulator; merge() is associative so partial results combine in any order.
class Running {
 public:
  void add(double x) noexcept {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  void merge(const Running& o) noexcept {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n_ + o.n_);
    const double d = o.mean_ - mean_;
    mean_ += d * static_cast<double>(o.n_) / total;
    m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / total;
    n_ += o.n_;
  }

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double stddev() const noexcept { return std::sqrt(variance()); }
  double sem() const noexcept { return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline Running summarize(std::span<const double> xs) {
  Running r;
  for (double x : xs) r.add(x);
  return r;
}

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double dof = 0.0;
};

// Pearson goodness of fit of observed counts against expected counts.
inline TestResult chi_square(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw std::invalid_argument("chi_square: need matching vectors of at least two cells");
  TestResult t;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0)) throw std::invalid_argument("chi_square: expected counts must be positive");
    const double d = observed[i] - expected[i];
    t.statistic += d * d / expected[i];
  }
  t.dof = static_cast<double>(observed.size() - 1);
  t.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(t.dof), t.statistic));
  return t;
}

inline TestResult chi_square_uniform(std::span<const double> observed) {
  double total = 0.0;
  for (double o : observed) total += o;
  std::vector<double> expected(observed.size(), total / static_cast<double>(observed.size()));
  return chi_square(observed, expected);
}

// One-sided F-test of H1: var(a) < var(b).
inline TestResult f_test_less(const Running& a, const Running& b) {
  if (a.count() < 2 || b.count() < 2) throw std::invalid_argument("f_test: need two samples per group");
  TestResult t;
  t.statistic = a.variance() / b.variance();
  boost::math::fisher_f dist(static_cast<double>(a.count() - 1), static_cast<double>(b.count() - 1));
  t.p_value = boost::math::cdf(dist, t.statistic);
  t.dof = static_cast<double>(a.count() - 1);
  return t;
}

// Asymptotic Kolmogorov tail with the small-sample correction of Stephens.
inline double kolmogorov_p(double d, double effective_n) {
  const double s = std::sqrt(effective_n);
  const double lambda = (s + 0.12 + 0.11 / s) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

inline TestResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw std::invalid_argument("ks: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, kolmogorov_p(d, n), 0.0};
}

// One-sample KS against a discrete CDF, evaluated on both sides of every jump.
inline TestResult ks_discrete(std::vector<double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw std::invalid_argument("ks: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size();) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double below = static_cast<double>(i) / n;
    const double upto = static_cast<double>(j) / n;
    d = std::max({d, std::abs(upto - cdf(xs[i])), std::abs(below - cdf(std::nextafter(xs[i], -INFINITY)))});
    i = j;
  }
  return {d, kolmogorov_p(d, n), 0.0};
}

inline TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, kolmogorov_p(d, na * nb / (na + nb)), 0.0};
}

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double intercept_se = 0.0;
  double slope_se = 0.0;
};

// Least squares y = a + b x; weights are inverse variances (all ones if empty).
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y, std::span<const double> w = {}) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need at least two points");
  if (!w.empty() && w.size() != x.size()) throw std::invalid_argument("linear_fit: weight length mismatch");
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double wi = w.empty() ? 1.0 : w[i];
    sw += wi;
    sx += wi * x[i];
    sy += wi * y[i];
    sxx += wi * x[i] * x[i];
    sxy += wi * x[i] * y[i];
  }
  const double det = sw * sxx - sx * sx;
  if (det == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  LinearFit f;
  f.slope = (sw * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / sw;
  if (!w.empty()) {
    f.slope_se = std::sqrt(sw / det);
    f.intercept_se = std::sqrt(sxx / det);
  } else if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      rss += r * r;
    }
    const double s2 = rss / static_cast<double>(x.size() - 2);
    f.slope_se = std::sqrt(s2 * sw / det);
    f.intercept_se = std::sqrt(s2 * sxx / det);
  }
  return f;
}

// Slope of log y against log x.
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return linear_fit(lx, ly).slope;
}

// Finite-size ansatz e(n) = e_inf + b n^(-2/3), weighted by 1/sem^2.
struct Extrapolation {
  double value = 0.0;
  double sem = 0.0;
  double slope = 0.0;
};

inline Extrapolation extrapolate_n23(std::span<const double> n, std::span<const double> mean,
                                     std::span<const double> sem) {
  std::vector<double> x(n.size()), w(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    x[i] = std::pow(n[i], -2.0 / 3.0);
    w[i] = sem[i] > 0 ? 1.0 / (sem[i] * sem[i]) : 1.0;
  }
  const LinearFit f = linear_fit(x, mean, w);
  return {f.intercept, f.intercept_se, f.slope};
}

inline double normal_cdf(double x) { return boost::math::cdf(boost::math::normal(), x); }
inline double normal_quantile(double u) { return boost::math::quantile(boost::math::normal(), u); }

}  // namespace hyperglass::stats
