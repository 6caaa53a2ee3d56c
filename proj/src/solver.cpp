#include "porous_front/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "porous_front/errors.hpp"
#include "porous_front/potential.hpp"

namespace pfront {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::VectorXd stack(const Eigen::MatrixXd& levels) {
  const RowMatrix rm = levels;
  return Eigen::Map<const Eigen::VectorXd>(rm.data(), rm.size());
}

Eigen::MatrixXd unstack(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const RowMatrix>(v.data(), rows, cols);
}

KernelOptions kernel_options(const GridSpec& grid, const PicardConfig& cfg) {
  KernelOptions o;
  o.horizon = grid.T;
  o.quad = cfg.quad;
  o.levi_depth = cfg.levi_depth;
  return o;
}

SpatialGrid spatial(const GridSpec& grid) { return SpatialGrid{grid.half_width, grid.nx}; }

// Homogeneous solve with the fuel frozen at its window-start value.
Eigen::MatrixXd homogeneous(int layer, const WindowStart& start, const InitialData& data, const ModelParams& p,
                            const GridSpec& grid, const PicardConfig& cfg) {
  const Eigen::MatrixXd I = start.I(layer).transpose().replicate(grid.nt, 1);
  const Eigen::MatrixXd y = fuel_field(layer, data.y0(layer), I, p);
  const KernelHandle h(assemble_coefficients(layer, y, sup_norm(data.y0(layer)),
                                             lipschitz_norm(data.y0(layer), grid.dx()), p, grid, start.t0),
                       kernel_options(grid, cfg));
  const DuhamelOperators ops(h, spatial(grid), start.t0, grid.dt(), grid.nt - 1);
  return unstack(ops.represent(start.u(layer), nullptr), grid.nt, grid.nx);
}

}  // namespace

void PicardConfig::validate() const {
  if (!(tol_fixed_point > 0.0)) throw ConfigError("tol_fixed_point must be positive");
  if (!(window_shrink_factor > 0.0 && window_shrink_factor < 1.0))
    throw ConfigError("window_shrink_factor must lie in (0, 1)");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (levi_depth && *levi_depth < 1) throw ConfigError("levi_depth must be >= 1");
  quad.validate();
}

QuadraturePolicy PicardConfig::solver_quadrature() {
  QuadraturePolicy q;
  q.n_space = 49;
  q.n_time = 6;
  return q;
}

WindowStart WindowStart::from_initial(const InitialData& data) {
  WindowStart s;
  s.u1 = data.u0_1;
  s.u2 = data.u0_2;
  s.I1 = Eigen::VectorXd::Zero(data.x.size());
  s.I2 = Eigen::VectorXd::Zero(data.x.size());
  return s;
}

Eigen::MatrixXd cumulative_integral(const Eigen::MatrixXd& u, const Eigen::VectorXd& I0, double dt,
                                    const ModelParams& p) {
  Eigen::MatrixXd I(u.rows(), u.cols());
  const Eigen::MatrixXd rate = u.unaryExpr([&](double s) { return arrhenius_tilde(s, p); });
  I.row(0) = I0.transpose();
  for (Eigen::Index k = 1; k < u.rows(); ++k) I.row(k) = I.row(k - 1) + 0.5 * dt * (rate.row(k - 1) + rate.row(k));
  return I;
}

Eigen::MatrixXd fuel_field(int layer, const Eigen::VectorXd& y0, const Eigen::MatrixXd& I, const ModelParams& p) {
  Eigen::MatrixXd y(I.rows(), I.cols());
  for (Eigen::Index k = 0; k < I.rows(); ++k)
    for (Eigen::Index j = 0; j < I.cols(); ++j) y(k, j) = fuel_from_history(layer, y0(j), I(k, j), p);
  return y;
}

double holder_radius(int layer, double y0_lip_norm, const ModelParams& p) {
  const int i = layer - 1;
  return (p.lambda[i] + p.c[i]) / p.a[i] * (1.0 + 2.0 * p.b[i] * y0_lip_norm / p.a[i]);
}

ParabolicCoefficients assemble_coefficients(int layer, const Eigen::MatrixXd& y, double y0_sup, double y0_lip_norm,
                                            const ModelParams& p, const GridSpec& grid, double t0) {
  if (y.rows() != grid.nt || y.cols() != grid.nx) throw DomainError("fuel field does not match the lattice");
  if ((y.array() < 0.0).any()) throw DomainError("negative fuel in coefficient assembly");
  const Eigen::MatrixXd alpha = y.unaryExpr([&](double v) { return alpha_coeff(layer, v, p); });
  const Eigen::MatrixXd beta = y.unaryExpr([&](double v) { return beta_coeff(layer, v, p); });
  const int i = layer - 1;
  ParabolicCoefficients pc;
  pc.a = CoefficientField::gridded(-grid.half_width, grid.dx(), t0, grid.dt(), alpha);
  pc.b = CoefficientField::gridded(-grid.half_width, grid.dx(), t0, grid.dt(), beta);
  pc.c = CoefficientField::constant(0.0);
  pc.lambda0 = std::min(p.lambda[i] / (p.a[i] + p.b[i] * y0_sup), alpha.minCoeff());
  pc.lambda1 = p.lambda[i] / p.a[i];
  pc.holder_alpha = 1.0;
  pc.holder_R = holder_radius(layer, y0_lip_norm, p);
  return pc;
}

std::array<Eigen::MatrixXd, 2> apply_A(const std::array<Eigen::MatrixXd, 2>& u_prev, const WindowStart& start,
                                       const InitialData& data, const ModelParams& p, const GridSpec& grid,
                                       const PicardConfig& cfg) {
  for (const auto& u : u_prev)
    if (u.rows() != grid.nt || u.cols() != grid.nx) throw DomainError("iterate does not match the lattice");
  std::array<Eigen::MatrixXd, 2> out;
  for (int layer = 1; layer <= 2; ++layer) {
    const Eigen::MatrixXd& ui = u_prev[layer - 1];
    const Eigen::MatrixXd I = cumulative_integral(ui, start.I(layer), grid.dt(), p);
    const Eigen::MatrixXd y = fuel_field(layer, data.y0(layer), I, p);
    Eigen::MatrixXd F(grid.nt, grid.nx);
    for (int k = 0; k < grid.nt; ++k)
      for (int j = 0; j < grid.nx; ++j) F(k, j) = reaction_f(layer, y(k, j), u_prev[0](k, j), u_prev[1](k, j), p);
    const KernelHandle h(assemble_coefficients(layer, y, sup_norm(data.y0(layer)),
                                               lipschitz_norm(data.y0(layer), grid.dx()), p, grid, start.t0),
                         kernel_options(grid, cfg));
    const DuhamelOperators ops(h, spatial(grid), start.t0, grid.dt(), grid.nt - 1);
    const Eigen::VectorXd source = stack(F);
    const Eigen::VectorXd w = ops.represent(start.u(layer), &source);
    if (!w.allFinite()) throw NumericalError("non-finite value in the Picard map");
    out[layer - 1] = unstack(w, grid.nt, grid.nx);
  }
  return out;
}

double holder_norm_estimate(const Eigen::MatrixXd& field, double dx, double dt, std::uint64_t seed) {
  const Eigen::Index nt = field.rows(), nx = field.cols();
  if (field.size() == 0) return 0.0;
  double quotient = 0.0;
  const double sdt = std::sqrt(dt);
  for (Eigen::Index k = 0; k < nt; ++k)
    for (Eigen::Index j = 0; j + 1 < nx; ++j)
      quotient = std::max(quotient, std::abs(field(k, j + 1) - field(k, j)) / dx);
  for (Eigen::Index k = 0; k + 1 < nt; ++k)
    for (Eigen::Index j = 0; j < nx; ++j)
      quotient = std::max(quotient, std::abs(field(k + 1, j) - field(k, j)) / sdt);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick_t(0, nt - 1), pick_x(0, nx - 1);
  const Eigen::Index pairs = 4 * field.size();
  for (Eigen::Index n = 0; n < pairs; ++n) {
    const Eigen::Index k1 = pick_t(rng), j1 = pick_x(rng), k2 = pick_t(rng), j2 = pick_x(rng);
    if (k1 == k2 && j1 == j2) continue;
    const double den = std::abs(j1 - j2) * dx + std::sqrt(std::abs(k1 - k2) * dt);
    quotient = std::max(quotient, std::abs(field(k1, j1) - field(k2, j2)) / den);
  }
  return field.cwiseAbs().maxCoeff() + quotient;
}

PicardResult picard_window(const WindowStart& start, const InitialData& data, const ModelParams& p,
                           const GridSpec& grid_in, const PicardConfig& cfg, int window_index) {
  cfg.validate();
  grid_in.validate();
  if (start.u1.size() != grid_in.nx || start.u2.size() != grid_in.nx || data.x.size() != grid_in.nx)
    throw ConfigError("initial profiles do not match the grid");
  GridSpec grid = grid_in;
  PicardResult result;
  PicardReport& rep = result.report;

  const double dx = grid.dx();
  const double norm1 = lipschitz_norm(start.u1, dx), norm2 = lipschitz_norm(start.u2, dx);
  const double data_norm = std::max(norm1, norm2);

  std::array<Eigen::MatrixXd, 2> solution;
  for (int attempt = 0;; ++attempt) {
    if (grid.T < grid.nt * std::numeric_limits<double>::epsilon())
      throw NumericalError("local existence failure: window shrunk below resolution");

    // Sigma-ball radii from a homogeneous solve at the window start.
    for (int layer = 1; layer <= 2; ++layer) {
      const int i = layer - 1;
      const double own = layer == 1 ? norm1 : norm2;
      double K = 1.0;
      if (own > 0.0) K = std::max(1.0, holder_norm_estimate(homogeneous(layer, start, data, p, grid, cfg), dx,
                                                            grid.dt(), cfg.seed) / own);
      rep.K_fitted[i] = K;
      rep.ball_radius[i] = cfg.ball_radius[i] > 0.0 ? cfg.ball_radius[i] : 2.0 * K * data_norm;
    }

    std::array<Eigen::MatrixXd, 2> u{start.u1.transpose().replicate(grid.nt, 1),
                                     start.u2.transpose().replicate(grid.nt, 1)};
    bool converged = false;
    double prev_gap = std::numeric_limits<double>::infinity();
    int growth = 0;
    for (int it = 1; it <= cfg.max_iters; ++it) {
      std::array<Eigen::MatrixXd, 2> next = apply_A(u, start, data, p, grid, cfg);
      const double gap = std::max((next[0] - u[0]).cwiseAbs().maxCoeff(), (next[1] - u[1]).cwiseAbs().maxCoeff());
      IterationRecord rec;
      rec.window = window_index;
      rec.attempt = attempt;
      rec.iteration = it;
      rec.T = grid.T;
      rec.gap = gap;
      for (int i = 0; i < 2; ++i) rec.holder[i] = holder_norm_estimate(next[i], dx, grid.dt(), cfg.seed);
      rec.u_min = std::min(next[0].minCoeff(), next[1].minCoeff());
      rec.u_max = std::max(next[0].maxCoeff(), next[1].maxCoeff());
      rep.iterations.push_back(rec);
      u = std::move(next);
      if (rec.holder[0] > rep.ball_radius[0] || rec.holder[1] > rep.ball_radius[1]) break;
      if (gap < cfg.tol_fixed_point) {
        converged = true;
        break;
      }
      growth = gap >= prev_gap ? growth + 1 : 0;
      if (growth >= 3) break;
      prev_gap = gap;
    }
    if (converged) {
      rep.T_used = grid.T;
      rep.fixed_point_residual = rep.iterations.back().gap;
      solution = std::move(u);
      break;
    }
    ++rep.shrinks;
    grid.T *= cfg.window_shrink_factor;
  }

  SystemState& st = result.state;
  st.times = Eigen::VectorXd::LinSpaced(grid.nt, start.t0, start.t0 + grid.T);
  st.x = data.x;
  st.u1 = std::move(solution[0]);
  st.u2 = std::move(solution[1]);
  st.I1 = cumulative_integral(st.u1, start.I1, grid.dt(), p);
  st.I2 = cumulative_integral(st.u2, start.I2, grid.dt(), p);
  st.y1 = fuel_field(1, data.y0_1, st.I1, p);
  st.y2 = fuel_field(2, data.y0_2, st.I2, p);
  return result;
}

PicardResult picard_solve(const InitialData& data, const ModelParams& p, const GridSpec& grid,
                          const PicardConfig& cfg) {
  p.validate();
  data.validate();
  return picard_window(WindowStart::from_initial(data), data, p, grid, cfg, 0);
}

SystemState picard_frozen_fuel(const SystemState& fuel, const InitialData& data, const ModelParams& p,
                               const GridSpec& grid, const PicardConfig& cfg, double shift) {
  cfg.validate();
  grid.validate();
  if (fuel.levels() != grid.nt || fuel.x.size() != grid.nx) throw ConfigError("fuel fields do not match the lattice");
  const double t0 = fuel.times(0);
  std::vector<DuhamelOperators> ops;
  ops.reserve(2);
  for (int layer = 1; layer <= 2; ++layer) {
    const KernelHandle h(assemble_coefficients(layer, fuel.y(layer), sup_norm(data.y0(layer)),
                                               lipschitz_norm(data.y0(layer), grid.dx()), p, grid, t0),
                         kernel_options(grid, cfg));
    ops.emplace_back(h, spatial(grid), t0, grid.dt(), grid.nt - 1);
  }
  const Eigen::VectorXd u0_1 = fuel.u1.row(0).transpose(), u0_2 = fuel.u2.row(0).transpose();
  std::array<Eigen::MatrixXd, 2> u{u0_1.transpose().replicate(grid.nt, 1), u0_2.transpose().replicate(grid.nt, 1)};
  double prev_gap = std::numeric_limits<double>::infinity();
  int growth = 0;
  for (int it = 1;; ++it) {
    std::array<Eigen::MatrixXd, 2> next;
    for (int layer = 1; layer <= 2; ++layer) {
      const Eigen::MatrixXd& y = fuel.y(layer);
      Eigen::MatrixXd F(grid.nt, grid.nx);
      for (int k = 0; k < grid.nt; ++k)
        for (int j = 0; j < grid.nx; ++j) F(k, j) = reaction_f(layer, y(k, j), u[0](k, j), u[1](k, j), p) + shift;
      const Eigen::VectorXd src = stack(F);
      next[layer - 1] = unstack(ops[layer - 1].represent(layer == 1 ? u0_1 : u0_2, &src), grid.nt, grid.nx);
    }
    const double gap = std::max((next[0] - u[0]).cwiseAbs().maxCoeff(), (next[1] - u[1]).cwiseAbs().maxCoeff());
    u = std::move(next);
    if (!(gap < cfg.tol_fixed_point)) {
      growth = gap >= prev_gap ? growth + 1 : 0;
      prev_gap = gap;
      if (growth >= 3 || it >= cfg.max_iters || !std::isfinite(gap))
        throw NumericalError("frozen-fuel Picard iteration failed to contract");
      continue;
    }
    break;
  }
  SystemState st = fuel;
  st.u1 = std::move(u[0]);
  st.u2 = std::move(u[1]);
  return st;
}

GlobalResult continue_global(const InitialData& data, const ModelParams& p, const GridSpec& grid,
                             const PicardConfig& cfg, double horizon) {
  if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
  p.validate();
  data.validate();
  GlobalResult out;
  WindowStart start = WindowStart::from_initial(data);
  std::vector<SystemState> pieces;
  const double eps = 1e-12 * horizon;
  for (int w = 0; start.t0 < horizon - eps; ++w) {
    GridSpec g = grid;
    g.T = std::min(grid.T, horizon - start.t0);
    PicardResult r = picard_window(start, data, p, g, cfg, w);
    const SystemState& st = r.state;
    const Eigen::Index last = st.levels() - 1;
    WindowSummary sum;
    sum.t_end = st.times(last);
    for (int layer = 1; layer <= 2; ++layer) {
      const Eigen::VectorXd prof = st.u(layer).row(last).transpose();
      sum.sup_dx[layer - 1] = sup_dx(prof, st.dx());
      sum.lp[layer - 1] = lp_norm(prof, st.dx(), grid.p);
    }
    sum.report = std::move(r.report);
    out.windows.push_back(std::move(sum));
    start.t0 = st.times(last);
    start.u1 = st.u1.row(last).transpose();
    start.u2 = st.u2.row(last).transpose();
    start.I1 = st.I1.row(last).transpose();
    start.I2 = st.I2.row(last).transpose();
    pieces.push_back(std::move(r.state));
  }

  Eigen::Index rows = 1;
  for (const SystemState& s : pieces) rows += s.levels() - 1;
  SystemState& all = out.state;
  const Eigen::Index nx = data.x.size();
  all.x = data.x;
  all.times.resize(rows);
  for (Eigen::MatrixXd* m : {&all.u1, &all.u2, &all.I1, &all.I2, &all.y1, &all.y2}) m->resize(rows, nx);
  Eigen::Index row = 0;
  for (size_t w = 0; w < pieces.size(); ++w) {
    const SystemState& s = pieces[w];
    const Eigen::Index skip = w == 0 ? 0 : 1;
    const Eigen::Index n = s.levels() - skip;
    all.times.segment(row, n) = s.times.segment(skip, n);
    all.u1.middleRows(row, n) = s.u1.bottomRows(n);
    all.u2.middleRows(row, n) = s.u2.bottomRows(n);
    all.I1.middleRows(row, n) = s.I1.bottomRows(n);
    all.I2.middleRows(row, n) = s.I2.bottomRows(n);
    all.y1.middleRows(row, n) = s.y1.bottomRows(n);
    all.y2.middleRows(row, n) = s.y2.bottomRows(n);
    row += n;
  }
  return out;
}

}  // namespace pfront
