#pragma once

#include <string>
#include <vector>

#include "porous_front/model.hpp"
#include "porous_front/solver.hpp"
#include "porous_front/state.hpp"

namespace pfront {

/// Where the worst violation of a check occurred.
struct CheckLocation {
  int layer = 0;
  double t = 0.0;
  double x = 0.0;
};

struct CheckReport {
  std::string name;
  bool passed = true;
  double worst_violation = 0.0;  ///< nonnegative excess over the asserted bound
  CheckLocation where;
  double tolerance = 0.0;
  std::string notes;
};

/// -tol <= u_i <= phi(t) + tol at every node.
CheckReport check_sector(const SystemState& state, const UpperSolution& env, double tol);

/// 0 <= y_i <= |y0_i|_inf and y_i nonincreasing in time.
CheckReport check_fuel(const SystemState& state, const InitialData& data, double tol);

/// Orders the -delta, unperturbed and +delta semilinear solves (fuel frozen to
/// the unperturbed trajectory) and checks gap(delta)/gap(delta/2) in [1.6, 2.4].
CheckReport check_comparison(const InitialData& data, const ModelParams& p, const GridSpec& grid,
                             const PicardConfig& cfg, double delta, double tol);

/// |u1|_p + |u2|_p <= C1 (1 + C2 t e^{C2 t}) (1 + tol), C1 the value at t = 0 and
/// C2 the reaction Lipschitz bound on [0, phi(T)]^2 x [0, |y0|_inf].
CheckReport check_lp_envelope(const SystemState& state, const InitialData& data, const ModelParams& p, double lp,
                              double tol);

/// Gradient trace bounded (last window max <= 2 x first window max) and edge
/// values below edge_ratio x interior max. window_ends are the end times of
/// the windows in the state.
CheckReport check_gradient_bound(const SystemState& state, const std::vector<double>& window_ends,
                                 double edge_ratio = 1e-3);

/// Solves the linear problem of layer 1 with coefficients frozen from `state`
/// and with a perturbed by each eps; requires gap(eps_{k+1}) <= 0.8 gap(eps_k)
/// for successive halvings.
CheckReport check_solution_stability(const SystemState& state, const InitialData& data, const ModelParams& p,
                                     const GridSpec& grid, const PicardConfig& cfg, const std::vector<double>& eps);

/// checks.csv body and a text summary.
std::string reports_csv(const std::vector<CheckReport>& reports);
std::string reports_text(const std::vector<CheckReport>& reports);

}  // namespace pfront
