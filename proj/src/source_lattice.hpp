#pragma once

#include <vector>

#include <Eigen/Dense>

#include "kernel_terms.hpp"
#include "porous_front/kernel.hpp"

namespace pfront::detail {

/// Levi iterates for one source (xi, tau), stored on the similarity lattice
/// z = (x - xi)/sqrt(t - tau), r = sqrt(t - tau). Values are scaled by t - tau.
class SourceLattice {
 public:
  SourceLattice(const ParabolicCoefficients& coeffs, double xi, double tau, double span,
                const QuadraturePolicy& quad, int depth);

  /// Number of non-negligible iterates actually stored.
  int levels() const { return static_cast<int>(levels_.size()); }
  double span() const { return span_; }

  /// m-th iterate at an arbitrary target; 0 beyond the stored levels.
  double iterate(int m, double x, double t) const;
  /// Alternating partial sum up to the handle depth.
  double phi(double x, double t) const;
  double gamma(double x, double t) const;
  double gamma_dx(double x, double t) const;

  /// Largest stored |iterate| * (t - tau) of level m (1-based).
  double level_sup(int m) const;

 private:
  struct Plan;

  void check_target(double t) const;
  Plan make_plan(KernelKind kind, double x, double t) const;
  double apply(const Plan& plan, const Eigen::MatrixXd& g) const;

  ParabolicCoefficients coeffs_;
  double xi_, tau_, span_;
  QuadraturePolicy quad_;
  int depth_;
  Eigen::VectorXd z_, hz_, r_;
  QuadratureRule rho_;  // Gauss nodes on [0, 1], scaled per target
  std::vector<Eigen::MatrixXd> levels_;  // Nz x Nr
  Eigen::MatrixXd phi_full_, phi_short_;
};

}  // namespace pfront::detail
