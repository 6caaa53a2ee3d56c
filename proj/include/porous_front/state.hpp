#pragma once

#include <Eigen/Dense>

namespace pfront {

/// Space-time lattice for one window.
struct GridSpec {
  double half_width = 8.0;  ///< L
  int nx = 81;
  double T = 0.25;  ///< window length
  int nt = 11;      ///< time levels including t0
  double p = 2.0;   ///< Lebesgue exponent for norm tracking

  double dx() const { return 2.0 * half_width / (nx - 1); }
  double dt() const { return T / (nt - 1); }
  Eigen::VectorXd nodes() const { return Eigen::VectorXd::LinSpaced(nx, -half_width, half_width); }
  void validate() const;
};

/// Trajectory of both layers. Row k of every field is the profile at times(k).
struct SystemState {
  Eigen::VectorXd times;
  Eigen::VectorXd x;
  Eigen::MatrixXd u1, u2;
  Eigen::MatrixXd I1, I2;
  Eigen::MatrixXd y1, y2;

  Eigen::Index levels() const { return times.size(); }
  const Eigen::MatrixXd& u(int layer) const { return layer == 1 ? u1 : u2; }
  const Eigen::MatrixXd& I(int layer) const { return layer == 1 ? I1 : I2; }
  const Eigen::MatrixXd& y(int layer) const { return layer == 1 ? y1 : y2; }
  double dx() const { return x.size() > 1 ? x(1) - x(0) : 1.0; }
};

/// Trapezoid integral of |v|^p over the nodes, raised to 1/p.
double lp_norm(const Eigen::VectorXd& v, double dx, double p);

/// max |central difference| of a profile (one-sided at the ends).
double sup_dx(const Eigen::VectorXd& v, double dx);

}  // namespace pfront
