#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "porous_front/kernel.hpp"
#include "porous_front/model.hpp"
#include "porous_front/state.hpp"

namespace pfront {

struct PicardConfig {
  /// Sigma-ball radius per layer; a non-positive entry is replaced by the fitted
  /// default 2 K_i max_j |u0_j|_1.
  std::array<double, 2> ball_radius{0.0, 0.0};
  double tol_fixed_point = 1e-8;
  int max_iters = 60;
  double window_shrink_factor = 0.5;
  std::optional<int> levi_depth;
  QuadraturePolicy quad = solver_quadrature();
  std::uint64_t seed = 0;

  void validate() const;
  static QuadraturePolicy solver_quadrature();
};

/// Data at the start of a window: temperatures and reaction integrals so far.
struct WindowStart {
  double t0 = 0.0;
  Eigen::VectorXd u1, u2;
  Eigen::VectorXd I1, I2;

  static WindowStart from_initial(const InitialData& data);
  const Eigen::VectorXd& u(int layer) const { return layer == 1 ? u1 : u2; }
  const Eigen::VectorXd& I(int layer) const { return layer == 1 ? I1 : I2; }
};

/// Running reaction integral I0 + int_0^t f(u) by the trapezoid rule (rows = time levels).
Eigen::MatrixXd cumulative_integral(const Eigen::MatrixXd& u, const Eigen::VectorXd& I0, double dt,
                                    const ModelParams& p);

/// y0 exp(-A_i I) nodewise.
Eigen::MatrixXd fuel_field(int layer, const Eigen::VectorXd& y0, const Eigen::MatrixXd& I, const ModelParams& p);

/// Coefficients (alpha_i(y), beta_i(y), 0) of layer i sampled on the window lattice.
ParabolicCoefficients assemble_coefficients(int layer, const Eigen::MatrixXd& y, double y0_sup, double y0_lip_norm,
                                            const ModelParams& p, const GridSpec& grid, double t0);

/// Holder radius R_i = (lambda_i + c_i)/a_i (1 + 2 b_i |y0_i|_1 / a_i).
double holder_radius(int layer, double y0_lip_norm, const ModelParams& p);

/// One Picard map: temperatures (rows = levels) -> new temperatures.
std::array<Eigen::MatrixXd, 2> apply_A(const std::array<Eigen::MatrixXd, 2>& u_prev, const WindowStart& start,
                                       const InitialData& data, const ModelParams& p, const GridSpec& grid,
                                       const PicardConfig& cfg);

/// sup|f| + max |f(P) - f(Q)| / (|x_P - x_Q| + |t_P - t_Q|^{1/2}) over axis-adjacent
/// pairs and a seeded random subset of distant pairs. Rows are time levels.
double holder_norm_estimate(const Eigen::MatrixXd& field, double dx, double dt, std::uint64_t seed = 0);

struct IterationRecord {
  int window = 0;
  int attempt = 0;
  int iteration = 0;
  double T = 0.0;
  double gap = 0.0;
  std::array<double, 2> holder{};
  double u_min = 0.0;
  double u_max = 0.0;
};

struct PicardReport {
  std::vector<IterationRecord> iterations;
  std::array<double, 2> ball_radius{};
  std::array<double, 2> K_fitted{};
  int shrinks = 0;
  double T_used = 0.0;
  double fixed_point_residual = 0.0;
};

struct PicardResult {
  SystemState state;
  PicardReport report;
};

PicardResult picard_solve(const InitialData& data, const ModelParams& p, const GridSpec& grid,
                          const PicardConfig& cfg);

/// Local solve from an arbitrary window start.
PicardResult picard_window(const WindowStart& start, const InitialData& data, const ModelParams& p,
                           const GridSpec& grid, const PicardConfig& cfg, int window_index = 0);

/// Semilinear solve with the fuel fields frozen to those of `fuel` (one window on
/// `grid`) and every reaction term shifted by `shift`.
SystemState picard_frozen_fuel(const SystemState& fuel, const InitialData& data, const ModelParams& p,
                               const GridSpec& grid, const PicardConfig& cfg, double shift);

struct WindowSummary {
  double t_end = 0.0;
  std::array<double, 2> sup_dx{};
  std::array<double, 2> lp{};
  PicardReport report;
};

struct GlobalResult {
  SystemState state;
  std::vector<WindowSummary> windows;
};

GlobalResult continue_global(const InitialData& data, const ModelParams& p, const GridSpec& grid,
                             const PicardConfig& cfg, double horizon);

}  // namespace pfront
