#include "porous_front/potential.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kernel_terms.hpp"
#include "porous_front/errors.hpp"
#include "porous_front/parallel.hpp"

namespace pfront {

namespace {

using detail::KernelKind;
using detail::kernel_value;

// Adds weight * (value at position y) to a row, using constant extension
// outside the grid and a 4-point Lagrange stencil inside.
inline void scatter_cubic(double* row, const SpatialGrid& g, double y, double weight) {
  double u = (y - g.x(0)) / g.dx();
  u = std::clamp(u, 0.0, static_cast<double>(g.nx - 1));
  const double frac = u - std::floor(u);
  if (frac == 0.0) {
    row[static_cast<int>(u)] += weight;
    return;
  }
  const LagrangeStencil<4> st = lagrange_stencil<4>(u, g.nx);
  for (int i = 0; i < 4; ++i) row[st.first + i] += weight * st.w[i];
}

}  // namespace

DuhamelOperators::DuhamelOperators(const KernelHandle& h, const SpatialGrid& grid, double tau, double dt, int steps)
    : grid_(grid), tau_(tau), dt_(dt), steps_(steps), depth_(h.levi_depth()) {
  grid.validate();
  if (!(dt > 0.0)) throw DomainError("Duhamel lattice needs a positive time step");
  if (steps < 2) throw ConfigError("Duhamel lattice needs at least two time steps");
  const ParabolicCoefficients& pc = h.coeffs();
  const QuadraturePolicy& quad = h.quad();
  const int nx = grid.nx;
  const Eigen::Index n = size();
  const double dx = grid.dx();
  const double p = quad.sing_exponent;
  const double wsd = quad.domain_halfwidth;  // standard deviations kept
  const double spread = std::sqrt(2.0 * pc.lambda1);
  const double narrow = std::sqrt(2.0 * pc.lambda0);
  const QuadratureRule unit = gauss_legendre(quad.n_time, 0.0, 1.0);
  const QuadratureRule window = trapezoid(quad.n_space, -wsd * spread, wsd * spread);

  iz_ = Matrix::Zero(n, nx);
  ilz_ = Matrix::Zero(n, nx);
  vz_ = Matrix::Zero(n, n);
  vlz_ = Matrix::Zero(n, n);
  for (int j = 0; j < nx; ++j) iz_(j, j) = 1.0;

  // Integrates K(x, t, y, s) * field(y) over y, where the field is given by its
  // grid samples; weights are added to rows rz / rlz at column offset `col`.
  auto spatial = [&](double x, double t, double s, double w, double* rz, double* rlz) {
    const double sd_min = narrow * std::sqrt(t - s);
    const double sd_max = spread * std::sqrt(t - s);
    if (sd_min >= 1.5 * dx) {
      const int reach = static_cast<int>(std::ceil(wsd * sd_max / dx));
      const int centre = static_cast<int>(std::lround((x - grid.x(0)) / dx));
      for (int i = centre - reach; i <= centre + reach; ++i) {
        const double y = grid.x(0) + i * dx;
        const int col = std::clamp(i, 0, nx - 1);
        const double wz = w * dx;
        if (rz) rz[col] += wz * kernel_value(KernelKind::Z, pc, x, t, y, s);
        if (rlz) rlz[col] += wz * kernel_value(KernelKind::LZ, pc, x, t, y, s);
      }
    } else {
      const double scale = std::sqrt(t - s);
      for (Eigen::Index q = 0; q < window.size(); ++q) {
        const double y = x + window.nodes(q) * scale;
        const double wy = w * window.weights(q) * scale;
        if (rz) scatter_cubic(rz, grid, y, wy * kernel_value(KernelKind::Z, pc, x, t, y, s));
        if (rlz) scatter_cubic(rlz, grid, y, wy * kernel_value(KernelKind::LZ, pc, x, t, y, s));
      }
    }
  };

  const std::size_t targets = static_cast<std::size_t>(steps) * nx;
  parallel_for(targets, [&](std::size_t idx) {
    const int k = 1 + static_cast<int>(idx / nx);
    const int j = static_cast<int>(idx % nx);
    const Eigen::Index row = static_cast<Eigen::Index>(k) * nx + j;
    const double x = grid.x(j);
    const double t = tau + k * dt;

    spatial(x, t, tau, 1.0, iz_.row(row).data(), ilz_.row(row).data());

    double* vz = vz_.row(row).data();
    double* vlz = vlz_.row(row).data();
    std::vector<double> sz(nx), slz(nx);
    auto deposit = [&](int level, double share) {
      const std::size_t off = static_cast<std::size_t>(level) * nx;
      for (int i = 0; i < nx; ++i) {
        vz[off + i] += share * sz[i];
        vlz[off + i] += share * slz[i];
      }
    };
    // Intervals away from the target: Gauss nodes in s, linear in time.
    for (int l = 0; l + 1 < k; ++l) {
      for (Eigen::Index a = 0; a < unit.size(); ++a) {
        const double theta = unit.nodes(a);
        std::fill(sz.begin(), sz.end(), 0.0);
        std::fill(slz.begin(), slz.end(), 0.0);
        spatial(x, t, tau + (l + theta) * dt, unit.weights(a) * dt, sz.data(), slz.data());
        deposit(l, 1.0 - theta);
        deposit(l + 1, theta);
      }
    }
    // Last interval: s = t - rho^p removes the kernel singularity.
    const double rho_max = std::pow(dt, 1.0 / p);
    for (Eigen::Index a = 0; a < unit.size(); ++a) {
      const double rho = rho_max * unit.nodes(a);
      const double rp = std::pow(rho, p);
      const double w = rho_max * unit.weights(a) * p * std::pow(rho, p - 1.0);
      const double theta = 1.0 - rp / dt;
      std::fill(sz.begin(), sz.end(), 0.0);
      std::fill(slz.begin(), slz.end(), 0.0);
      spatial(x, t, t - rp, w, sz.data(), slz.data());
      deposit(k - 1, 1.0 - theta);
      deposit(k, theta);
    }
  });
}

void DuhamelOperators::extrapolate_first_level(Eigen::VectorXd& v) const {
  const int nx = grid_.nx;
  v.head(nx) = 2.0 * v.segment(nx, nx) - v.segment(2 * nx, nx);
}

Eigen::VectorXd DuhamelOperators::initial_LZ(const Eigen::VectorXd& g) const {
  Eigen::VectorXd out = ilz_ * g;
  extrapolate_first_level(out);
  return out;
}

Eigen::VectorXd DuhamelOperators::volume_LZ(const Eigen::VectorXd& h) const {
  Eigen::VectorXd out = vlz_ * h;
  extrapolate_first_level(out);
  return out;
}

Eigen::VectorXd DuhamelOperators::represent(const Eigen::VectorXd& u0, const Eigen::VectorXd* source,
                                            Report* report) const {
  const int nx = grid_.nx;
  if (u0.size() != nx) throw DomainError("initial profile does not match the grid");
  if (source && source->size() != size()) throw DomainError("source does not match the space-time lattice");
  Eigen::VectorXd psi = initial_LZ(u0);
  if (source) psi += volume_LZ(*source);
  Report rep;
  rep.first_sup = psi.cwiseAbs().maxCoeff();
  Eigen::VectorXd density = -psi;
  rep.terms = 1;
  rep.last_sup = rep.first_sup;
  for (int m = 2; m <= depth_ && rep.first_sup > 0.0; ++m) {
    psi = volume_LZ(psi);
    const double sup = psi.cwiseAbs().maxCoeff();
    if (!(sup > 1e-16 * rep.first_sup)) break;
    density += ((m % 2) ? -1.0 : 1.0) * psi;
    rep.terms = m;
    rep.last_sup = sup;
  }
  if (source) density += *source;
  Eigen::VectorXd w = initial_Z(u0) + volume_Z(density);
  w.head(nx) = u0;
  if (report) *report = rep;
  return w;
}

Eigen::VectorXd apply_gamma(const KernelHandle& h, const SpatialGrid& grid, const Eigen::VectorXd& g, double t,
                            double tau) {
  if (!(t > tau)) throw DomainError("apply_gamma needs t > tau");
  if (g.size() != grid.nx) throw DomainError("profile does not match the grid");
  const int steps = h.quad().n_steps;
  const DuhamelOperators ops(h, grid, tau, (t - tau) / steps, steps);
  return ops.represent(g, nullptr).tail(grid.nx);
}

}  // namespace pfront
