#pragma once

// Test-only oracles: quadrature, empirical-CDF statistics and random point
// generators. Everything here is independent of the library code paths it
// is used to check.

#include <pwae/ball.hpp>
#include <pwae/common.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

namespace pwae::oracle {

/// Composite Simpson rule on [a, b] with n panels (n made even internally).
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2 == 1) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Kolmogorov-Smirnov statistic of samples against an analytic CDF.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - F));
    d = std::max(d, std::abs(static_cast<double>(i) / n - F));
  }
  return d;
}

/// Asymptotic KS critical value at significance alpha.
inline double ks_critical(double alpha, std::size_t n) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

/// Normalized CDF of an unnormalized density on [a, b], tabulated on a
/// uniform grid by the trapezoid rule and evaluated by linear interpolation.
inline std::function<double(double)> numeric_cdf(const std::function<double(double)>& density,
                                                 double a, double b, int n = 20000) {
  auto table = std::make_shared<std::vector<double>>(static_cast<std::size_t>(n) + 1, 0.0);
  const double h = (b - a) / n;
  double prev = density(a);
  for (int i = 1; i <= n; ++i) {
    const double cur = density(a + i * h);
    (*table)[static_cast<std::size_t>(i)] =
        (*table)[static_cast<std::size_t>(i) - 1] + 0.5 * h * (prev + cur);
    prev = cur;
  }
  const double total = table->back();
  return [table, a, b, h, total, n](double x) {
    if (x <= a) return 0.0;
    if (x >= b) return 1.0;
    const double pos = (x - a) / h;
    const int i = std::min(n - 1, static_cast<int>(pos));
    const double frac = pos - i;
    const double v = (*table)[static_cast<std::size_t>(i)] * (1.0 - frac) +
                     (*table)[static_cast<std::size_t>(i) + 1] * frac;
    return v / total;
  };
}

/// Random vector with norm uniform in [0, max_norm].
inline Vec random_in_ball(int dim, double max_norm, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, max_norm);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
  const double n = v.norm();
  if (n < 1e-12) return Vec::Zero(dim);
  return v * (unif(rng) / n);
}

inline ball::BallPoint random_point(int dim, double max_norm, const ball::BallConfig& cfg, Rng& rng) {
  return ball::BallPoint(random_in_ball(dim, max_norm, rng), cfg);
}

}  // namespace pwae::oracle
