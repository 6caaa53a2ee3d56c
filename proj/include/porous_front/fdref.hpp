#pragma once

#include <string>

#include <Eigen/Dense>

#include "porous_front/model.hpp"
#include "porous_front/state.hpp"

namespace pfront {

/// Finite-difference reference resolution and scheme.
struct FdConfig {
  int nx = 321;  ///< must equal the size of the data grid
  int nt = 401;  ///< time levels including t = 0
  double T = 0.25;
  double theta = 0.5;  ///< implicitness of the diffusion term
  std::string boundary = "constant-extension";

  double dt() const { return T / (nt - 1); }
  void validate() const;
};

/// One time level of both layers.
struct FdLevel {
  Eigen::VectorXd u1, u2, I1, I2, y1, y2;
};

/// Advances one level: theta-weighted diffusion, upwind convection, explicit
/// reaction, trapezoid reaction integral and exact fuel update.
FdLevel fd_step(const FdLevel& level, const InitialData& data, const ModelParams& p, const FdConfig& cfg);

/// Full trajectory on the data grid.
SystemState fd_solve(const InitialData& data, const ModelParams& p, const FdConfig& cfg);

/// Every sx-th node and st-th level of a trajectory.
SystemState subsample(const SystemState& fine, int sx, int st);

}  // namespace pfront
