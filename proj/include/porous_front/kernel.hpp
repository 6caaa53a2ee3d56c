#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "porous_front/coefficients.hpp"
#include "porous_front/quadrature.hpp"

namespace pfront {

namespace detail {
class SourceLattice;
}

/// Node counts and truncation of the kernel quadratures.
struct QuadraturePolicy {
  int n_space = 97;   ///< spatial nodes per kernel integral
  int n_time = 12;    ///< Gauss nodes per half time interval
  int n_radial = 16;  ///< Chebyshev nodes in sqrt(t - tau) on a source lattice
  int n_steps = 8;    ///< time levels used by apply_gamma
  double sing_exponent = 2.0;
  /// Truncation radius in standard deviations sqrt(2 lambda1 (t - tau)).
  double domain_halfwidth = 8.0;

  void validate() const;
  /// Cheaper rule for bulk sampling (mass integrals, coefficient gaps).
  static QuadraturePolicy coarse();
};

/// Fitted constants of the envelope |LZ| <= K s^{-(3-alpha)/2} exp(-C d^2/s).
struct TailConstants {
  double K = 0.0;
  double C = 0.0;
};

struct KernelOptions {
  std::optional<int> levi_depth;  ///< fixed depth; chosen from the tail bound when empty
  int max_depth = 256;
  double horizon = 1.0;  ///< largest t - tau the handle serves
  QuadraturePolicy quad;
};

/// Fundamental solution of L = d/dt - a d2/dx2 + b d/dx + c built by the
/// parametrix method. Copies share one lattice cache.
class KernelHandle {
 public:
  explicit KernelHandle(ParabolicCoefficients coeffs, KernelOptions options = {});

  const ParabolicCoefficients& coeffs() const;
  const QuadraturePolicy& quad() const;
  const TailConstants& tail_constants() const;
  int levi_depth() const;
  /// True when the tail bound at levi_depth meets the depth criterion.
  bool depth_certified() const;
  double horizon() const;

  std::shared_ptr<const detail::SourceLattice> lattice(double xi, double tau) const;

 private:
  struct Shared;
  std::shared_ptr<Shared> shared_;
};

double eval_Z(const ParabolicCoefficients& coeffs, double x, double t, double xi, double tau);
double eval_Z_dx(const ParabolicCoefficients& coeffs, double x, double t, double xi, double tau);
double eval_LZ(const ParabolicCoefficients& coeffs, double x, double t, double xi, double tau);

double levi_iterate_m(const KernelHandle& h, int m, double x, double t, double xi, double tau);
double levi_tail_bound(const KernelHandle& h, int m, double dt);

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
  int terms = 0;  ///< non-negligible iterates summed
};

SeriesValue eval_phi(const KernelHandle& h, double x, double t, double xi, double tau);
double eval_gamma(const KernelHandle& h, double x, double t, double xi, double tau);
double eval_gamma_dx(const KernelHandle& h, double x, double t, double xi, double tau);

/// Uniform grid on [-half_width, half_width].
struct SpatialGrid {
  double half_width = 8.0;
  int nx = 81;

  double dx() const { return 2.0 * half_width / (nx - 1); }
  double x(int j) const { return -half_width + j * dx(); }
  Eigen::VectorXd nodes() const { return Eigen::VectorXd::LinSpaced(nx, -half_width, half_width); }
  void validate() const;
};

/// x -> int Gamma(x,t,xi,tau) g(xi) dxi on the grid nodes.
Eigen::VectorXd apply_gamma(const KernelHandle& h, const SpatialGrid& grid, const Eigen::VectorXd& g, double t,
                            double tau);

/// Sample point (x, t, xi, tau).
using KernelSample = std::array<double, 4>;

struct GammaGap {
  double sup = 0.0;
  KernelSample where{};
};

/// sup over samples of |D^s Gamma_v - D^s Gamma_vbar| (t-tau)^{(1+s)/2} exp(C (x-xi)^2/(t-tau)),
/// with C the smaller fitted constant of the two handles.
GammaGap coefficient_gap(const KernelHandle& v, const KernelHandle& vbar, const std::vector<KernelSample>& samples,
                         int derivative = 0);

/// Least-squares fit of the first-iterate envelope, K inflated by 2.
TailConstants fit_tail_constants(const ParabolicCoefficients& coeffs, double horizon);

/// Writes x,t,xi,tau,gamma,gamma_dx rows.
void write_gamma_dump(const KernelHandle& h, const std::vector<KernelSample>& samples, const std::string& path);

}  // namespace pfront
