#pragma once

// Constitutive functions of the two-layer combustion model.
//
//   (u_i)_t - alpha_i(y_i) (u_i)_xx + beta_i(y_i) (u_i)_x = f_i(y_i, u_1, u_2)
//   (y_i)_t = -A_i y_i f(u_i)
//
// Layers are indexed 1 and 2 throughout the public API.

#include <array>
#include <cmath>

#include <Eigen/Dense>

namespace pfront {

struct ModelParams {
  std::array<double, 2> lambda{1.0, 1.0};  // thermal diffusivity numerators
  std::array<double, 2> a{1.0, 1.0};       // heat-capacity offsets
  std::array<double, 2> b{1.0, 1.0};       // heat-capacity fuel slopes
  std::array<double, 2> c{1.0, 1.0};       // convection numerators
  std::array<double, 2> d{1.0, 1.0};       // reaction offsets
  std::array<double, 2> A{1.0, 1.0};       // fuel-consumption rates
  double q = 1.0;                          // inter-layer heat transfer
  double E = 1.0;                          // activation energy

  /// Throws ConfigError unless every constant is strictly positive and finite.
  void validate() const;

  static ModelParams synthetic_default();
};

/// Samples of the four initial profiles on a uniform grid.
struct InitialData {
  Eigen::VectorXd x;  // node coordinates, uniform spacing
  Eigen::VectorXd u0_1, u0_2;
  Eigen::VectorXd y0_1, y0_2;
  double lip_bound = 0.0;

  const Eigen::VectorXd& u0(int layer) const { return layer == 1 ? u0_1 : u0_2; }
  const Eigen::VectorXd& y0(int layer) const { return layer == 1 ? y0_1 : y0_2; }

  double dx() const { return x.size() > 1 ? x(1) - x(0) : 1.0; }

  /// Throws ConfigError on negative samples, size mismatch or a Lipschitz
  /// quotient above lip_bound.
  void validate() const;
};

/// Max of |v|.
double sup_norm(const Eigen::VectorXd& v);

/// Largest difference quotient between neighbouring samples.
double lipschitz_estimate(const Eigen::VectorXd& v, double dx);

/// The Lipschitz norm sup|v| + Lip(v) on grid samples.
double lipschitz_norm(const Eigen::VectorXd& v, double dx);

/// Envelope phi(t) = (M + beta) e^{alpha t} - beta.
struct UpperSolution {
  double M = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  static UpperSolution from_data(const InitialData& data, const ModelParams& p);
};

/// Arrhenius rate e^{-E/s}, extended by zero for s <= 0.
template <typename Scalar>
Scalar arrhenius_tilde(Scalar s, Scalar E) {
  using std::exp;
  return s > Scalar(0) ? exp(-E / s) : Scalar(0);
}

template <typename Scalar>
Scalar arrhenius_tilde_deriv(Scalar s, Scalar E) {
  using std::exp;
  return s > Scalar(0) ? (E / (s * s)) * exp(-E / s) : Scalar(0);
}

double arrhenius_tilde(double s, const ModelParams& p);
double arrhenius_tilde_deriv(double s, const ModelParams& p);

/// lambda_i / (a_i + b_i y). Rejects y < 0.
double alpha_coeff(int layer, double y, const ModelParams& p);

/// c_i / (a_i + b_i y). Rejects y < 0.
double beta_coeff(int layer, double y, const ModelParams& p);

/// f_i(y, u1, u2) with the zero-extended Arrhenius rate. Rejects y < 0.
double reaction_f(int layer, double y, double u1, double u2, const ModelParams& p);

/// Partial derivatives of reaction_f with respect to (u_i, u_j).
struct ReactionSlopes {
  double own;
  double other;
};
ReactionSlopes reaction_f_slopes(int layer, double y, double u1, double u2, const ModelParams& p);

/// y0 exp(-A_i I). Rejects y0 < 0 and I < 0.
double fuel_from_history(int layer, double y0, double integral, const ModelParams& p);

/// phi(t). Rejects t < 0.
double phi_upper(double t, const UpperSolution& env);

/// phi'(t).
double phi_upper_rate(double t, const UpperSolution& env);

/// Upper bound on the column sums of |df_i/du_j| over [0, umax]^2 x [0, ymax_i].
/// Used as the Gronwall rate for Lp envelopes.
double reaction_lipschitz_bound(const ModelParams& p, double umax, const std::array<double, 2>& ymax);

}  // namespace pfront
