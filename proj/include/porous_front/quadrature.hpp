#pragma once

#include <array>
#include <cmath>

#include <Eigen/Dense>

namespace pfront {

/// Nodes and weights of a 1-D quadrature rule.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [lo, hi].
QuadratureRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

/// n-point trapezoid rule on [lo, hi] (n >= 2).
QuadratureRule trapezoid(int n, double lo, double hi);

/// Chebyshev points of the first kind on [lo, hi] (all interior), ascending.
Eigen::VectorXd chebyshev_points(int n, double lo, double hi);

/// Barycentric interpolation weights at `at` for first-kind Chebyshev points of
/// size n on [lo, hi]. The result sums to one.
Eigen::VectorXd chebyshev_interp_weights(int n, double lo, double hi, double at);

/// Local Lagrange stencil on a uniform grid x_j = x0 + j h, j = 0..n-1.
/// `first` is the index of the first stencil node; nodes outside [0, n) are
/// left to the caller (the stencil is shifted inward when possible).
template <int Order>
struct LagrangeStencil {
  int first = 0;
  std::array<double, Order> w{};
};

/// Builds the Order-point stencil at fractional grid position u = (x - x0)/h.
/// The stencil is centred on u and shifted to stay inside [0, n).
template <int Order>
LagrangeStencil<Order> lagrange_stencil(double u, int n) {
  static_assert(Order >= 2);
  LagrangeStencil<Order> s;
  int first = static_cast<int>(std::floor(u)) - (Order / 2 - 1);
  if (n >= Order) {
    if (first < 0) first = 0;
    if (first > n - Order) first = n - Order;
  }
  s.first = first;
  for (int i = 0; i < Order; ++i) {
    double num = 1.0, den = 1.0;
    const double ui = first + i;
    for (int k = 0; k < Order; ++k) {
      if (k == i) continue;
      num *= u - (first + k);
      den *= ui - (first + k);
    }
    s.w[i] = num / den;
  }
  return s;
}

/// Sum of terms b_k for k > m of the Levi majorant
///   b_k = K^k (pi/C)^{(k-1)/2} g(alpha/2)^k / g(k alpha/2) dt^{(k alpha - 3)/2},
/// g the gamma function. Evaluated in log space.
double levi_majorant_tail(double K, double C, double alpha, double dt, int m);

/// log of the general majorant term b_k.
double levi_majorant_log_term(double K, double C, double alpha, double dt, int k);

}  // namespace pfront
