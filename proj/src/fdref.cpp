#include "porous_front/fdref.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "porous_front/errors.hpp"

namespace pfront {

void FdConfig::validate() const {
  if (nx < 3 || nt < 2) throw ConfigError("finite-difference grid too small");
  if (!(T > 0.0)) throw ConfigError("finite-difference horizon must be positive");
  if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("theta must lie in [0, 1]");
  if (boundary != "constant-extension") throw ConfigError("unsupported boundary tag: " + boundary);
}

namespace {

// Solves the tridiagonal system lo[j] v[j-1] + di[j] v[j] + up[j] v[j+1] = r[j].
Eigen::VectorXd thomas(std::vector<double> lo, std::vector<double> di, std::vector<double> up, Eigen::VectorXd r) {
  const size_t n = di.size();
  for (size_t j = 1; j < n; ++j) {
    const double m = lo[j] / di[j - 1];
    di[j] -= m * up[j - 1];
    r(j) -= m * r(j - 1);
  }
  r(n - 1) /= di[n - 1];
  for (size_t j = n - 1; j-- > 0;) r(j) = (r(j) - up[j] * r(j + 1)) / di[j];
  return r;
}

// Second difference with one ghost node of constant extension at each end.
inline double d2(const Eigen::VectorXd& u, Eigen::Index j, double dx) {
  const Eigen::Index n = u.size();
  const double left = u(std::max<Eigen::Index>(j - 1, 0));
  const double right = u(std::min<Eigen::Index>(j + 1, n - 1));
  return (left - 2.0 * u(j) + right) / (dx * dx);
}

}  // namespace

FdLevel fd_step(const FdLevel& level, const InitialData& data, const ModelParams& p, const FdConfig& cfg) {
  const Eigen::Index n = level.u1.size();
  const double dx = data.dx();
  const double dt = cfg.dt();
  std::array<Eigen::VectorXd, 2> next;
  for (int layer = 1; layer <= 2; ++layer) {
    const Eigen::VectorXd& u = layer == 1 ? level.u1 : level.u2;
    const Eigen::VectorXd& y = layer == 1 ? level.y1 : level.y2;
    Eigen::VectorXd a(n), b(n), rhs(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      a(j) = alpha_coeff(layer, y(j), p);
      b(j) = beta_coeff(layer, y(j), p);
    }
    if (cfg.theta == 0.0 && dt > dx * dx / (2.0 * a.maxCoeff()))
      throw NumericalError("explicit diffusion step violates dt <= dx^2 / (2 max a)");
    if (dt * b.cwiseAbs().maxCoeff() > dx) throw NumericalError("upwind convection step violates the CFL bound");
    for (Eigen::Index j = 0; j < n; ++j) {
      const double upwind = b(j) >= 0.0 ? u(j) - u(std::max<Eigen::Index>(j - 1, 0))
                                        : u(std::min<Eigen::Index>(j + 1, n - 1)) - u(j);
      const double f = reaction_f(layer, y(j), level.u1(j), level.u2(j), p);
      rhs(j) = u(j) + dt * ((1.0 - cfg.theta) * a(j) * d2(u, j, dx) - b(j) * upwind / dx + f);
    }
    if (cfg.theta > 0.0) {
      std::vector<double> lo(n), di(n), up(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        const double r = cfg.theta * dt * a(j) / (dx * dx);
        lo[j] = j > 0 ? -r : 0.0;
        up[j] = j + 1 < n ? -r : 0.0;
        di[j] = 1.0 + 2.0 * r;
        if (j == 0 || j + 1 == n) di[j] -= r;  // ghost node folded in
      }
      next[layer - 1] = thomas(lo, di, up, rhs);
    } else {
      next[layer - 1] = rhs;
    }
    if (!next[layer - 1].allFinite()) throw NumericalError("non-finite value in finite-difference step");
  }

  FdLevel out;
  out.u1 = std::move(next[0]);
  out.u2 = std::move(next[1]);
  auto advance = [&](const Eigen::VectorXd& I, const Eigen::VectorXd& u_old, const Eigen::VectorXd& u_new) {
    Eigen::VectorXd r(n);
    for (Eigen::Index j = 0; j < n; ++j)
      r(j) = I(j) + 0.5 * dt * (arrhenius_tilde(u_old(j), p) + arrhenius_tilde(u_new(j), p));
    return r;
  };
  out.I1 = advance(level.I1, level.u1, out.u1);
  out.I2 = advance(level.I2, level.u2, out.u2);
  out.y1.resize(n);
  out.y2.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.y1(j) = fuel_from_history(1, data.y0_1(j), out.I1(j), p);
    out.y2(j) = fuel_from_history(2, data.y0_2(j), out.I2(j), p);
  }
  return out;
}

SystemState fd_solve(const InitialData& data, const ModelParams& p, const FdConfig& cfg) {
  cfg.validate();
  if (data.x.size() != cfg.nx) throw ConfigError("finite-difference nx does not match the data grid");
  const Eigen::Index n = data.x.size();
  SystemState st;
  st.x = data.x;
  st.times = Eigen::VectorXd::LinSpaced(cfg.nt, 0.0, cfg.T);
  for (Eigen::MatrixXd* m : {&st.u1, &st.u2, &st.I1, &st.I2, &st.y1, &st.y2}) m->resize(cfg.nt, n);
  FdLevel lv{data.u0_1, data.u0_2, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), data.y0_1, data.y0_2};
  auto store = [&](int k) {
    st.u1.row(k) = lv.u1.transpose();
    st.u2.row(k) = lv.u2.transpose();
    st.I1.row(k) = lv.I1.transpose();
    st.I2.row(k) = lv.I2.transpose();
    st.y1.row(k) = lv.y1.transpose();
    st.y2.row(k) = lv.y2.transpose();
  };
  store(0);
  for (int k = 1; k < cfg.nt; ++k) {
    lv = fd_step(lv, data, p, cfg);
    store(k);
  }
  return st;
}

SystemState subsample(const SystemState& fine, int sx, int st) {
  if (sx < 1 || st < 1) throw ConfigError("subsample strides must be positive");
  if ((fine.x.size() - 1) % sx != 0 || (fine.levels() - 1) % st != 0)
    throw ConfigError("subsample strides do not divide the grid");
  const Eigen::Index nx = (fine.x.size() - 1) / sx + 1, nt = (fine.levels() - 1) / st + 1;
  auto pick = [&](const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out(nt, nx);
    for (Eigen::Index k = 0; k < nt; ++k)
      for (Eigen::Index j = 0; j < nx; ++j) out(k, j) = m(k * st, j * sx);
    return out;
  };
  SystemState out;
  out.x.resize(nx);
  for (Eigen::Index j = 0; j < nx; ++j) out.x(j) = fine.x(j * sx);
  out.times.resize(nt);
  for (Eigen::Index k = 0; k < nt; ++k) out.times(k) = fine.times(k * st);
  out.u1 = pick(fine.u1);
  out.u2 = pick(fine.u2);
  out.I1 = pick(fine.I1);
  out.I2 = pick(fine.I2);
  out.y1 = pick(fine.y1);
  out.y2 = pick(fine.y2);
  return out;
}

}  // namespace pfront
