#include "source_lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "porous_front/errors.hpp"
#include "porous_front/quadrature.hpp"

namespace pfront::detail {

namespace {

constexpr int kStencil = 8;

// Denominators of the 8-point Lagrange basis on integer nodes 0..7.
constexpr std::array<double, kStencil> kLagrangeDen = {-5040.0, 720.0, -240.0, 144.0,
                                                        -144.0, 240.0, -720.0, 5040.0};

// Interpolates column `col` (uniform nodes 0..n-1) at fractional index u; zero
// outside the node range.
inline double interp8(const double* col, int n, double u) {
  if (u < -0.5 || u > n - 0.5) return 0.0;
  int first = static_cast<int>(std::floor(u)) - (kStencil / 2 - 1);
  first = std::clamp(first, 0, n - kStencil);
  const double f = u - first;
  std::array<double, kStencil> d;
  for (int i = 0; i < kStencil; ++i) d[i] = f - i;
  for (int i = 0; i < kStencil; ++i)
    if (d[i] == 0.0) return col[first + i];
  std::array<double, kStencil + 1> pre, suf;
  pre[0] = 1.0;
  for (int i = 0; i < kStencil; ++i) pre[i + 1] = pre[i] * d[i];
  suf[kStencil] = 1.0;
  for (int i = kStencil - 1; i >= 0; --i) suf[i] = suf[i + 1] * d[i];
  double acc = 0.0;
  for (int i = 0; i < kStencil; ++i) acc += pre[i] * suf[i + 1] / kLagrangeDen[i] * col[first + i];
  return acc;
}

}  // namespace

struct SourceLattice::Plan {
  Eigen::MatrixXd cw1, cw2;  // Nr x n_time radial weights of the two halves
  std::vector<double> w1;    // n_time * Nz
  std::vector<double> w2;    // n_time * Nz
  std::vector<double> u2;    // fractional z index per second-half node
};

SourceLattice::SourceLattice(const ParabolicCoefficients& coeffs, double xi, double tau, double span,
                             const QuadraturePolicy& quad, int depth)
    : coeffs_(coeffs), xi_(xi), tau_(tau), span_(span), quad_(quad), depth_(depth) {
  if (!(span > 0.0)) throw DomainError("source lattice needs a positive time span");
  const double w = quad.domain_halfwidth * std::sqrt(2.0 * coeffs.lambda1);
  const QuadratureRule zr = trapezoid(quad.n_space, -w, w);
  z_ = zr.nodes;
  hz_ = zr.weights;
  r_ = chebyshev_points(quad.n_radial, 0.0, std::sqrt(span));
  rho_ = gauss_legendre(quad.n_time, 0.0, 1.0);

  const int nz = quad.n_space, nr = quad.n_radial;
  Eigen::MatrixXd first(nz, nr);
  for (int k = 0; k < nr; ++k) {
    const double s = r_(k) * r_(k);
    for (int j = 0; j < nz; ++j)
      first(j, k) = s * kernel_value(KernelKind::LZ, coeffs_, xi + z_(j) * r_(k), tau + s, xi, tau);
  }
  const double first_sup = first.cwiseAbs().maxCoeff();
  phi_full_ = Eigen::MatrixXd::Zero(nz, nr);
  phi_short_ = Eigen::MatrixXd::Zero(nz, nr);
  if (first_sup == 0.0) return;
  levels_.push_back(first);

  if (depth > 1) {
    std::vector<Plan> plans;
    plans.reserve(static_cast<size_t>(nz) * nr);
    for (int k = 0; k < nr; ++k)
      for (int j = 0; j < nz; ++j)
        plans.push_back(make_plan(KernelKind::LZ, xi + z_(j) * r_(k), tau + r_(k) * r_(k)));

    for (int m = 2; m <= depth; ++m) {
      const Eigen::MatrixXd& prev = levels_.back();
      Eigen::MatrixXd next(nz, nr);
      for (int k = 0; k < nr; ++k) {
        const Plan& head = plans[static_cast<size_t>(k) * nz];
        const Eigen::MatrixXd p1 = prev * head.cw1;
        const Eigen::MatrixXd p2 = prev * head.cw2;
        const double s = r_(k) * r_(k);
        for (int j = 0; j < nz; ++j) {
          const Plan& pl = plans[static_cast<size_t>(k) * nz + j];
          double acc = 0.0;
          for (int a = 0; a < quad.n_time; ++a) {
            const double* c1 = p1.col(a).data();
            const double* c2 = p2.col(a).data();
            const size_t base = static_cast<size_t>(a) * nz;
            for (int i = 0; i < nz; ++i) {
              acc += pl.w1[base + i] * c1[i];
              const double wv = pl.w2[base + i];
              if (wv != 0.0) acc += wv * interp8(c2, nz, pl.u2[base + i]);
            }
          }
          next(j, k) = s * acc;
        }
      }
      const double sup = next.cwiseAbs().maxCoeff();
      if (!(sup > 1e-17 * first_sup)) break;
      levels_.push_back(std::move(next));
    }
  }
  for (size_t m = 0; m < levels_.size(); ++m) {
    const double sign = (m % 2 == 0) ? -1.0 : 1.0;  // (-1)^(m+1) with 0-based m
    phi_full_ += sign * levels_[m];
    if (m + 1 < levels_.size() || static_cast<int>(levels_.size()) < depth_) phi_short_ += sign * levels_[m];
  }
}

void SourceLattice::check_target(double t) const {
  if (!(t > tau_)) throw DomainError("kernel evaluated at t <= tau");
  if (t - tau_ > span_ * (1.0 + 1e-12)) throw DomainError("target time beyond the kernel horizon");
}

SourceLattice::Plan SourceLattice::make_plan(KernelKind kind, double x, double t) const {
  const int nz = quad_.n_space, nr = quad_.n_radial, nt = quad_.n_time;
  const double p = quad_.sing_exponent;
  const double s = t - tau_;
  const double rho_max = std::pow(0.5 * s, 1.0 / p);
  const double hz = z_(1) - z_(0);
  const double rmax = std::sqrt(span_);
  Plan pl;
  pl.cw1.resize(nr, nt);
  pl.cw2.resize(nr, nt);
  pl.w1.assign(static_cast<size_t>(nt) * nz, 0.0);
  pl.w2.assign(static_cast<size_t>(nt) * nz, 0.0);
  pl.u2.assign(static_cast<size_t>(nt) * nz, 0.0);
  for (int a = 0; a < nt; ++a) {
    const double rho = rho_max * rho_.nodes(a);
    const double wrho = rho_max * rho_.weights(a);
    const double rp = std::pow(rho, p);  // sigma offset from the nearer endpoint
    const double jac = wrho * p * std::pow(rho, p - 1.0);

    // First half: sigma = tau + rho^p, y = xi + z r'.
    {
      const double r1 = std::sqrt(rp);
      const double sigma = tau_ + rp;
      pl.cw1.col(a) = chebyshev_interp_weights(nr, 0.0, rmax, r1);
      const double scale = jac * r1 / rp;
      for (int i = 0; i < nz; ++i) {
        const double y = xi_ + z_(i) * r1;
        pl.w1[static_cast<size_t>(a) * nz + i] = scale * hz_(i) * kernel_value(kind, coeffs_, x, t, y, sigma);
      }
    }
    // Second half: sigma = t - rho^p, y = x + v sqrt(t - sigma).
    {
      const double sigma = t - rp;
      const double r2 = std::sqrt(s - rp);
      const double width = std::sqrt(rp);
      pl.cw2.col(a) = chebyshev_interp_weights(nr, 0.0, rmax, r2);
      const double scale = jac * width / (r2 * r2);
      for (int q = 0; q < nz; ++q) {
        const double y = x + z_(q) * width;
        const size_t idx = static_cast<size_t>(a) * nz + q;
        pl.w2[idx] = scale * hz_(q) * kernel_value(kind, coeffs_, x, t, y, sigma);
        pl.u2[idx] = ((y - xi_) / r2 - z_(0)) / hz;
      }
    }
  }
  return pl;
}

double SourceLattice::apply(const Plan& pl, const Eigen::MatrixXd& g) const {
  const int nz = quad_.n_space;
  const Eigen::MatrixXd p1 = g * pl.cw1;
  const Eigen::MatrixXd p2 = g * pl.cw2;
  double acc = 0.0;
  for (int a = 0; a < quad_.n_time; ++a) {
    const size_t base = static_cast<size_t>(a) * nz;
    for (int i = 0; i < nz; ++i) {
      acc += pl.w1[base + i] * p1(i, a);
      const double wv = pl.w2[base + i];
      if (wv != 0.0) acc += wv * interp8(p2.col(a).data(), nz, pl.u2[base + i]);
    }
  }
  return acc;
}

double SourceLattice::iterate(int m, double x, double t) const {
  check_target(t);
  if (m == 1) return kernel_value(KernelKind::LZ, coeffs_, x, t, xi_, tau_);
  if (m - 1 > levels()) return 0.0;
  return apply(make_plan(KernelKind::LZ, x, t), levels_[static_cast<size_t>(m - 2)]);
}

double SourceLattice::phi(double x, double t) const {
  check_target(t);
  const double first = kernel_value(KernelKind::LZ, coeffs_, x, t, xi_, tau_);
  if (levels_.empty() || depth_ == 1) return -first;
  return -first - apply(make_plan(KernelKind::LZ, x, t), phi_short_);
}

double SourceLattice::gamma(double x, double t) const {
  check_target(t);
  const double z = kernel_value(KernelKind::Z, coeffs_, x, t, xi_, tau_);
  if (levels_.empty()) return z;
  return z + apply(make_plan(KernelKind::Z, x, t), phi_full_);
}

double SourceLattice::gamma_dx(double x, double t) const {
  check_target(t);
  const double zx = kernel_value(KernelKind::Zx, coeffs_, x, t, xi_, tau_);
  if (levels_.empty()) return zx;
  return zx + apply(make_plan(KernelKind::Zx, x, t), phi_full_);
}

double SourceLattice::level_sup(int m) const {
  if (m < 1 || m > levels()) return 0.0;
  return levels_[static_cast<size_t>(m - 1)].cwiseAbs().maxCoeff();
}

}  // namespace pfront::detail
