#include "porous_front/state.hpp"

#include <cmath>

#include "porous_front/errors.hpp"

namespace pfront {

void GridSpec::validate() const {
  if (nx < 16) throw ConfigError("grid needs nx >= 16");
  if (nt < 4) throw ConfigError("grid needs nt >= 4");
  if (!(half_width > 0.0)) throw ConfigError("grid half width must be positive");
  if (!(T > 0.0)) throw ConfigError("window length must be positive");
  if (!(p > 1.0)) throw ConfigError("Lebesgue exponent must exceed 1");
}

double lp_norm(const Eigen::VectorXd& v, double dx, double p) {
  const Eigen::Index n = v.size();
  if (n == 0) return 0.0;
  const Eigen::ArrayXd w = v.array().abs().pow(p);
  const double integral = dx * (w.sum() - 0.5 * (w(0) + w(n - 1)));
  return std::pow(integral, 1.0 / p);
}

double sup_dx(const Eigen::VectorXd& v, double dx) {
  const Eigen::Index n = v.size();
  if (n < 2) return 0.0;
  double best = std::max(std::abs(v(1) - v(0)), std::abs(v(n - 1) - v(n - 2))) / dx;
  for (Eigen::Index j = 1; j + 1 < n; ++j) best = std::max(best, std::abs(v(j + 1) - v(j - 1)) / (2.0 * dx));
  return best;
}

}  // namespace pfront
