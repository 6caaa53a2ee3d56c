#include "porous_front/coefficients.hpp"

#include <algorithm>
#include <cmath>

#include "porous_front/errors.hpp"

namespace pfront {

CoefficientField CoefficientField::constant(double value) {
  CoefficientField f;
  f.kind_ = Kind::Constant;
  f.value_ = value;
  return f;
}

CoefficientField CoefficientField::analytic(std::function<double(double, double)> fn) {
  if (!fn) throw ConfigError("analytic coefficient without a function");
  CoefficientField f;
  f.kind_ = Kind::Analytic;
  f.fn_ = std::move(fn);
  return f;
}

CoefficientField CoefficientField::gridded(double x0, double dx, double t0, double dt, Eigen::MatrixXd values) {
  if (values.size() == 0) throw ConfigError("gridded coefficient without values");
  if (!(dx > 0.0) || (values.rows() > 1 && !(dt > 0.0)))
    throw ConfigError("gridded coefficient needs positive spacings");
  if (!values.allFinite()) throw ConfigError("gridded coefficient has non-finite values");
  CoefficientField f;
  f.kind_ = Kind::Gridded;
  f.grid_ = std::make_shared<const Eigen::MatrixXd>(std::move(values));
  f.x0_ = x0;
  f.dx_ = dx;
  f.t0_ = t0;
  f.dt_ = dt > 0.0 ? dt : 1.0;
  return f;
}

namespace {

// Clamped cell index and fraction on a uniform axis.
inline void locate(double u, Eigen::Index n, Eigen::Index& i, double& frac) {
  if (n == 1 || u <= 0.0) {
    i = 0;
    frac = 0.0;
    return;
  }
  if (u >= static_cast<double>(n - 1)) {
    i = n - 2;
    frac = 1.0;
    return;
  }
  i = static_cast<Eigen::Index>(u);
  frac = u - static_cast<double>(i);
}

}  // namespace

double CoefficientField::operator()(double x, double t) const {
  switch (kind_) {
    case Kind::Constant:
      return value_;
    case Kind::Analytic:
      return fn_(x, t);
    case Kind::Gridded: {
      const Eigen::MatrixXd& g = *grid_;
      Eigen::Index j, k;
      double fx, ft;
      locate((x - x0_) / dx_, g.cols(), j, fx);
      locate((t - t0_) / dt_, g.rows(), k, ft);
      const Eigen::Index j1 = g.cols() > 1 ? j + 1 : j;
      const Eigen::Index k1 = g.rows() > 1 ? k + 1 : k;
      const double lo = g(k, j) + fx * (g(k, j1) - g(k, j));
      const double hi = g(k1, j) + fx * (g(k1, j1) - g(k1, j));
      return lo + ft * (hi - lo);
    }
  }
  return 0.0;
}

void ParabolicCoefficients::validate(double half_width, double t0, double t1, int samples) const {
  if (!(lambda0 > 0.0) || !(lambda1 >= lambda0))
    throw ConfigError("ellipticity bounds need 0 < lambda0 <= lambda1");
  if (!(holder_alpha > 0.0) || holder_alpha > 1.0) throw ConfigError("Holder exponent must lie in (0, 1]");
  if (holder_R < 0.0) throw ConfigError("Holder constant must be non-negative");
  const int n = std::max(samples, 2);
  for (int k = 0; k < n; ++k) {
    const double t = t0 + (t1 - t0) * k / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double x = -half_width + 2.0 * half_width * j / (n - 1);
      const double av = a(x, t);
      if (!std::isfinite(av) || av < lambda0 * (1.0 - 1e-12) || av > lambda1 * (1.0 + 1e-12))
        throw ConfigError("diffusion coefficient leaves [lambda0, lambda1] at x=" + std::to_string(x) +
                          ", t=" + std::to_string(t));
      if (!std::isfinite(b(x, t)) || !std::isfinite(c(x, t)))
        throw ConfigError("non-finite drift or potential coefficient");
    }
  }
}

ParabolicCoefficients ParabolicCoefficients::heat(double a) {
  ParabolicCoefficients pc;
  pc.a = CoefficientField::constant(a);
  pc.b = CoefficientField::constant(0.0);
  pc.c = CoefficientField::constant(0.0);
  pc.lambda0 = a;
  pc.lambda1 = a;
  return pc;
}

CoefficientGap coefficient_distance(const ParabolicCoefficients& lhs, const ParabolicCoefficients& rhs,
                                    double half_width, double t0, double t1, int samples) {
  CoefficientGap gap;
  const int n = std::max(samples, 2);
  for (int k = 0; k < n; ++k) {
    const double t = t0 + (t1 - t0) * k / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double x = -half_width + 2.0 * half_width * j / (n - 1);
      const double d = std::abs(lhs.a(x, t) - rhs.a(x, t)) + std::abs(lhs.b(x, t) - rhs.b(x, t)) +
                       std::abs(lhs.c(x, t) - rhs.c(x, t));
      if (d > gap.sup) gap = {d, x, t};
    }
  }
  return gap;
}

}  // namespace pfront
