#pragma once

#include <Eigen/Dense>

#include "porous_front/kernel.hpp"

namespace pfront {

/// Initial and volume potentials of Z and LZ on a space-time lattice
/// x_j = grid.x(j), t_k = tau + k dt, k = 0..steps. Space-time vectors are
/// stacked level by level: entry k * nx + j.
class DuhamelOperators {
 public:
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  DuhamelOperators(const KernelHandle& h, const SpatialGrid& grid, double tau, double dt, int steps);

  int steps() const { return steps_; }
  const SpatialGrid& grid() const { return grid_; }
  double tau() const { return tau_; }
  double dt() const { return dt_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(steps_ + 1) * grid_.nx; }

  /// int Z(x, t_k, xi, tau) g(xi) dxi; level 0 is g itself.
  Eigen::VectorXd initial_Z(const Eigen::VectorXd& g) const { return iz_ * g; }
  /// int LZ(x, t_k, xi, tau) g(xi) dxi; level 0 extrapolated.
  Eigen::VectorXd initial_LZ(const Eigen::VectorXd& g) const;
  /// int_tau^{t_k} int Z(x, t_k, y, s) h(y, s) dy ds.
  Eigen::VectorXd volume_Z(const Eigen::VectorXd& h) const { return vz_ * h; }
  /// int_tau^{t_k} int LZ(x, t_k, y, s) h(y, s) dy ds; level 0 extrapolated.
  Eigen::VectorXd volume_LZ(const Eigen::VectorXd& h) const;

  struct Report {
    int terms = 0;              ///< Levi iterates summed
    double first_sup = 0.0;     ///< sup of the first iterate density
    double last_sup = 0.0;      ///< sup of the last iterate density summed
  };

  /// w = int Gamma u0 + int int Gamma F for a zero or given source F (stacked).
  Eigen::VectorXd represent(const Eigen::VectorXd& u0, const Eigen::VectorXd* source, Report* report = nullptr) const;

 private:
  void extrapolate_first_level(Eigen::VectorXd& v) const;

  SpatialGrid grid_;
  double tau_, dt_;
  int steps_;
  int depth_;
  Matrix iz_, ilz_, vz_, vlz_;
};

}  // namespace pfront
