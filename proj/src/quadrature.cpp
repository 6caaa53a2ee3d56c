#include "porous_front/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "porous_front/errors.hpp"

namespace pfront {

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw ConfigError("Gauss-Legendre rule needs at least one node");
  QuadratureRule rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.nodes(i) = mid - half * z;
    rule.nodes(n - 1 - i) = mid + half * z;
    rule.weights(i) = half * w;
    rule.weights(n - 1 - i) = half * w;
  }
  return rule;
}

QuadratureRule trapezoid(int n, double lo, double hi) {
  if (n < 2) throw ConfigError("trapezoid rule needs at least two nodes");
  QuadratureRule rule{Eigen::VectorXd::LinSpaced(n, lo, hi), Eigen::VectorXd::Constant(n, (hi - lo) / (n - 1))};
  rule.weights(0) *= 0.5;
  rule.weights(n - 1) *= 0.5;
  return rule;
}

Eigen::VectorXd chebyshev_points(int n, double lo, double hi) {
  Eigen::VectorXd r(n);
  for (int k = 0; k < n; ++k) {
    const double theta = (2.0 * k + 1.0) * std::numbers::pi / (2.0 * n);
    r(k) = lo + 0.5 * (hi - lo) * (1.0 - std::cos(theta));
  }
  return r;
}

Eigen::VectorXd chebyshev_interp_weights(int n, double lo, double hi, double at) {
  const Eigen::VectorXd pts = chebyshev_points(n, lo, hi);
  Eigen::VectorXd w(n);
  for (int k = 0; k < n; ++k) {
    const double diff = at - pts(k);
    if (std::abs(diff) < 1e-15 * (hi - lo)) {
      w.setZero();
      w(k) = 1.0;
      return w;
    }
    // The 1-cos mapping reverses the usual ordering, which only flips the global sign.
    const double theta = (2.0 * k + 1.0) * std::numbers::pi / (2.0 * n);
    w(k) = ((k % 2) ? -1.0 : 1.0) * std::sin(theta) / diff;
  }
  return w / w.sum();
}

double levi_majorant_log_term(double K, double C, double alpha, double dt, int k) {
  return k * std::log(K) + 0.5 * (k - 1) * std::log(std::numbers::pi / C) + k * std::lgamma(0.5 * alpha) -
         std::lgamma(0.5 * k * alpha) + 0.5 * (k * alpha - 3.0) * std::log(dt);
}

double levi_majorant_tail(double K, double C, double alpha, double dt, int m) {
  if (K <= 0.0) return 0.0;
  // Terms grow geometrically before the gamma function takes over; sum until past
  // the peak and negligible relative to the running total.
  double log_max = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  for (int k = m + 1; k < m + 200000; ++k) {
    const double lt = levi_majorant_log_term(K, C, alpha, dt, k);
    logs.push_back(lt);
    if (lt > log_max) log_max = lt;
    const bool past_peak = k > m + 2 && lt < logs[logs.size() - 2];
    if (past_peak && lt < log_max - 46.0) break;
  }
  if (!std::isfinite(log_max)) return 0.0;
  if (log_max > 700.0) return std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (double lt : logs) sum += std::exp(lt - log_max);
  return sum * std::exp(log_max);
}

}  // namespace pfront
