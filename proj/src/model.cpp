#include "porous_front/model.hpp"

#include <algorithm>
#include <string>

#include "porous_front/errors.hpp"

namespace pfront {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string("model parameter ") + name + " must be positive and finite");
  }
}

void require_layer(int layer) {
  if (layer != 1 && layer != 2) throw DomainError("layer index must be 1 or 2");
}

void require_fuel(double y) {
  if (y < 0.0) throw DomainError("negative fuel concentration " + std::to_string(y));
}

}  // namespace

void ModelParams::validate() const {
  for (int i = 0; i < 2; ++i) {
    require_positive(lambda[i], "lambda");
    require_positive(a[i], "a");
    require_positive(b[i], "b");
    require_positive(c[i], "c");
    require_positive(d[i], "d");
    require_positive(A[i], "A");
  }
  require_positive(q, "q");
  require_positive(E, "E");
}

ModelParams ModelParams::synthetic_default() {
  // Order-one synthetic values; no physical medium is implied.
  ModelParams p;
  p.lambda = {1.0, 0.8};
  p.a = {1.0, 1.2};
  p.b = {0.5, 0.4};
  p.c = {0.5, 0.3};
  p.d = {0.3, 0.2};
  p.A = {1.0, 0.8};
  p.q = 0.5;
  p.E = 1.0;
  return p;
}

double sup_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

double lipschitz_estimate(const Eigen::VectorXd& v, double dx) {
  if (v.size() < 2) return 0.0;
  const Eigen::Index n = v.size();
  return (v.tail(n - 1) - v.head(n - 1)).cwiseAbs().maxCoeff() / dx;
}

double lipschitz_norm(const Eigen::VectorXd& v, double dx) { return sup_norm(v) + lipschitz_estimate(v, dx); }

void InitialData::validate() const {
  const Eigen::Index n = x.size();
  if (n < 2) throw ConfigError("initial data needs at least two grid nodes");
  for (const auto* v : {&u0_1, &u0_2, &y0_1, &y0_2}) {
    if (v->size() != n) throw ConfigError("initial profile size does not match the grid");
    if (!v->allFinite()) throw ConfigError("initial profile contains non-finite values");
    if (v->minCoeff() < 0.0) throw ConfigError("initial profiles must be nonnegative");
    // Small relative slack: lip_bound is itself computed from these samples.
    if (lipschitz_estimate(*v, dx()) > lip_bound * (1.0 + 1e-12) + 1e-300) {
      throw ConfigError("initial profile exceeds the declared Lipschitz bound");
    }
  }
}

UpperSolution UpperSolution::from_data(const InitialData& data, const ModelParams& p) {
  UpperSolution env;
  env.M = std::max(sup_norm(data.u0_1), sup_norm(data.u0_2));
  for (int i = 0; i < 2; ++i) {
    const double ymax = sup_norm(data.y0(i + 1));
    env.alpha = std::max(env.alpha, p.A[i] * p.b[i] * ymax / p.a[i]);
    env.beta = std::max(env.beta, p.d[i] / (p.A[i] * p.b[i]));
  }
  return env;
}

double arrhenius_tilde(double s, const ModelParams& p) { return arrhenius_tilde(s, p.E); }

double arrhenius_tilde_deriv(double s, const ModelParams& p) { return arrhenius_tilde_deriv(s, p.E); }

double alpha_coeff(int layer, double y, const ModelParams& p) {
  require_layer(layer);
  require_fuel(y);
  const int i = layer - 1;
  return p.lambda[i] / (p.a[i] + p.b[i] * y);
}

double beta_coeff(int layer, double y, const ModelParams& p) {
  require_layer(layer);
  require_fuel(y);
  const int i = layer - 1;
  return p.c[i] / (p.a[i] + p.b[i] * y);
}

double reaction_f(int layer, double y, double u1, double u2, const ModelParams& p) {
  require_layer(layer);
  require_fuel(y);
  const int i = layer - 1;
  const double own = layer == 1 ? u1 : u2;
  const double denom = p.a[i] + p.b[i] * y;
  const double sign = layer == 1 ? -1.0 : 1.0;
  return (p.b[i] * p.A[i] * own + p.d[i]) / denom * y * arrhenius_tilde(own, p.E) +
         sign * p.q * (u1 - u2) / denom;
}

ReactionSlopes reaction_f_slopes(int layer, double y, double u1, double u2, const ModelParams& p) {
  require_layer(layer);
  require_fuel(y);
  const int i = layer - 1;
  const double own = layer == 1 ? u1 : u2;
  const double denom = p.a[i] + p.b[i] * y;
  const double burn = p.b[i] * p.A[i] * y * arrhenius_tilde(own, p.E) +
                      (p.b[i] * p.A[i] * own + p.d[i]) * y * arrhenius_tilde_deriv(own, p.E);
  return {(burn - p.q) / denom, p.q / denom};
}

double fuel_from_history(int layer, double y0, double integral, const ModelParams& p) {
  require_layer(layer);
  if (y0 < 0.0) throw DomainError("negative initial fuel");
  if (integral < 0.0) throw DomainError("cumulative reaction integral must be nonnegative");
  return y0 * std::exp(-p.A[layer - 1] * integral);
}

double phi_upper(double t, const UpperSolution& env) {
  if (t < 0.0) throw DomainError("phi_upper requires t >= 0");
  return env.M * std::exp(env.alpha * t) + env.beta * std::expm1(env.alpha * t);
}

double phi_upper_rate(double t, const UpperSolution& env) {
  return env.alpha * (env.M + env.beta) * std::exp(env.alpha * t);
}

double reaction_lipschitz_bound(const ModelParams& p, double umax, const std::array<double, 2>& ymax) {
  // (a_i + b_i y)|df_i/du_i| <= b_i A_i y f + (b_i A_i u + d_i) y f' + q with f <= 1 and
  // f' <= (4/E) e^{-2}; the coupling slope is q / (a_i + b_i y) <= q / a_i.
  const double fprime_max = 4.0 / p.E * std::exp(-2.0);
  std::array<double, 2> own{}, other{};
  for (int i = 0; i < 2; ++i) {
    const double burn = p.b[i] * p.A[i] * ymax[i] + (p.b[i] * p.A[i] * umax + p.d[i]) * ymax[i] * fprime_max;
    own[i] = (burn + p.q) / p.a[i];
    other[i] = p.q / p.a[i];
  }
  return std::max(own[0] + other[1], own[1] + other[0]);
}

}  // namespace pfront
