#pragma once

#include <functional>
#include <memory>
#include <string>

#include <Eigen/Dense>

namespace pfront {

/// Scalar field c(x, t). Constant, analytic or piecewise linear on a uniform
/// space-time grid (constant extension outside the grid).
class CoefficientField {
 public:
  CoefficientField() = default;

  static CoefficientField constant(double value);
  static CoefficientField analytic(std::function<double(double, double)> f);
  /// values(k, j) is the value at (x0 + j dx, t0 + k dt).
  static CoefficientField gridded(double x0, double dx, double t0, double dt, Eigen::MatrixXd values);

  double operator()(double x, double t) const;

  bool is_constant() const { return kind_ == Kind::Constant; }
  double constant_value() const { return value_; }

 private:
  enum class Kind { Constant, Analytic, Gridded };
  Kind kind_ = Kind::Constant;
  double value_ = 0.0;
  std::function<double(double, double)> fn_;
  std::shared_ptr<const Eigen::MatrixXd> grid_;
  double x0_ = 0.0, dx_ = 1.0, t0_ = 0.0, dt_ = 1.0;
};

/// Coefficients of L = d/dt - a d2/dx2 + b d/dx + c with ellipticity and
/// Holder data.
struct ParabolicCoefficients {
  CoefficientField a;
  CoefficientField b;
  CoefficientField c;
  double lambda0 = 1.0;  ///< lower bound of a
  double lambda1 = 1.0;  ///< upper bound of a
  double holder_alpha = 1.0;
  double holder_R = 0.0;

  /// Samples a on [-half_width, half_width] x [t0, t1] and throws ConfigError
  /// when a leaves [lambda0, lambda1] or the declared bounds are inconsistent.
  void validate(double half_width, double t0, double t1, int samples = 41) const;

  /// Constant-coefficient heat operator a d2/dx2.
  static ParabolicCoefficients heat(double a);
};

/// Largest sampled |a1 - a2| + |b1 - b2| + |c1 - c2| over a box; used to
/// quantify how far two coefficient sets are apart.
struct CoefficientGap {
  double sup = 0.0;
  double x = 0.0;
  double t = 0.0;
};

CoefficientGap coefficient_distance(const ParabolicCoefficients& lhs, const ParabolicCoefficients& rhs,
                                    double half_width, double t0, double t1, int samples = 41);

}  // namespace pfront
