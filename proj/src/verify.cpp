#include "porous_front/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "porous_front/errors.hpp"
#include "porous_front/potential.hpp"

namespace pfront {

namespace {

void note(CheckReport& r, double violation, int layer, double t, double x) {
  if (violation > r.worst_violation) {
    r.worst_violation = violation;
    r.where = {layer, t, x};
  }
}

CheckReport named(std::string name) {
  CheckReport r;
  r.name = std::move(name);
  return r;
}

void finish(CheckReport& r) { r.passed = r.worst_violation <= r.tolerance; }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

CheckReport check_sector(const SystemState& state, const UpperSolution& env, double tol) {
  CheckReport r = named("sector");
  r.tolerance = tol;
  for (Eigen::Index k = 0; k < state.levels(); ++k) {
    const double t = state.times(k);
    const double phi = phi_upper(t, env);
    for (int layer = 1; layer <= 2; ++layer)
      for (Eigen::Index j = 0; j < state.x.size(); ++j) {
        const double u = state.u(layer)(k, j);
        note(r, std::max(-u, u - phi), layer, t, state.x(j));
      }
  }
  finish(r);
  return r;
}

CheckReport check_fuel(const SystemState& state, const InitialData& data, double tol) {
  CheckReport r = named("fuel");
  r.tolerance = tol;
  for (int layer = 1; layer <= 2; ++layer) {
    const double ymax = sup_norm(data.y0(layer));
    const Eigen::MatrixXd& y = state.y(layer);
    for (Eigen::Index k = 0; k < state.levels(); ++k)
      for (Eigen::Index j = 0; j < state.x.size(); ++j) {
        double v = std::max(-y(k, j), y(k, j) - ymax);
        if (k > 0) v = std::max(v, y(k, j) - y(k - 1, j));
        note(r, v, layer, state.times(k), state.x(j));
      }
  }
  finish(r);
  return r;
}

CheckReport check_comparison(const InitialData& data, const ModelParams& p, const GridSpec& grid,
                             const PicardConfig& cfg, double delta, double tol) {
  CheckReport r = named("comparison");
  r.tolerance = tol;
  if (delta < 0.0) throw ConfigError("comparison delta must be nonnegative");
  PicardConfig tight = cfg;
  tight.tol_fixed_point = std::min(cfg.tol_fixed_point, 1e-11);
  const PicardResult base = picard_solve(data, p, grid, cfg);
  GridSpec g = grid;
  g.T = base.report.T_used;
  const SystemState mid = picard_frozen_fuel(base.state, data, p, g, tight, 0.0);

  auto sweep = [&](double d) {
    const SystemState up = picard_frozen_fuel(base.state, data, p, g, tight, d);
    const SystemState down = picard_frozen_fuel(base.state, data, p, g, tight, -d);
    double gap = 0.0;
    for (int layer = 1; layer <= 2; ++layer) {
      const Eigen::MatrixXd& u = mid.u(layer);
      for (Eigen::Index k = 0; k < u.rows(); ++k)
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
          const double lo = down.u(layer)(k, j), hi = up.u(layer)(k, j);
          note(r, std::max(lo - u(k, j), u(k, j) - hi), layer, mid.times(k), mid.x(j));
          gap = std::max({gap, std::abs(hi - u(k, j)), std::abs(u(k, j) - lo)});
        }
    }
    return gap;
  };
  const double g1 = sweep(delta);
  const double g2 = sweep(0.5 * delta);
  std::ostringstream n;
  n << "gap(delta)=" << fmt(g1) << " gap(delta/2)=" << fmt(g2);
  if (g2 > 0.0) {
    const double ratio = g1 / g2;
    n << " ratio=" << fmt(ratio);
    const double excess = std::max({0.0, 1.6 - ratio, ratio - 2.4});
    if (excess > r.worst_violation) {
      r.worst_violation = excess;
      r.where = {};
      n << " (ratio outside [1.6, 2.4])";
    }
  }
  r.notes = n.str();
  finish(r);
  return r;
}

CheckReport check_lp_envelope(const SystemState& state, const InitialData& data, const ModelParams& p, double lp,
                              double tol) {
  CheckReport r = named("lp_envelope_p" + fmt(lp));
  r.tolerance = tol;
  const UpperSolution env = UpperSolution::from_data(data, p);
  const double T = state.times(state.levels() - 1);
  const double c2 = reaction_lipschitz_bound(p, phi_upper(T - state.times(0), env),
                                             {sup_norm(data.y0_1), sup_norm(data.y0_2)});
  auto trace = [&](Eigen::Index k) {
    return lp_norm(state.u1.row(k).transpose(), state.dx(), lp) + lp_norm(state.u2.row(k).transpose(), state.dx(), lp);
  };
  const double c1 = trace(0);
  for (Eigen::Index k = 0; k < state.levels(); ++k) {
    const double t = state.times(k) - state.times(0);
    const double bound = c1 * (1.0 + c2 * t * std::exp(c2 * t));
    const double n = trace(k);
    // Relative excess so that tol reads as the (1 + tol) slack.
    const double excess = bound > 0.0 ? n / bound - 1.0 : n;
    note(r, std::max(0.0, excess), 0, state.times(k), 0.0);
  }
  r.notes = "C1=" + fmt(c1) + " C2=" + fmt(c2);
  finish(r);
  return r;
}

CheckReport check_gradient_bound(const SystemState& state, const std::vector<double>& window_ends, double edge_ratio) {
  CheckReport r = named("gradient_bound");
  r.tolerance = 0.0;
  const Eigen::Index n = state.x.size();
  const double first_end = window_ends.empty() ? state.times(state.levels() - 1) : window_ends.front();
  const double last_start = window_ends.size() > 1 ? window_ends[window_ends.size() - 2] : state.times(0);
  double first_max = 0.0, last_max = 0.0, interior = 0.0, edge = 0.0, overall = 0.0;
  CheckLocation edge_at;
  for (Eigen::Index k = 0; k < state.levels(); ++k) {
    const double t = state.times(k);
    for (int layer = 1; layer <= 2; ++layer) {
      const Eigen::VectorXd prof = state.u(layer).row(k).transpose();
      const double g = sup_dx(prof, state.dx());
      overall = std::max(overall, g);
      if (t <= first_end * (1.0 + 1e-12)) first_max = std::max(first_max, g);
      if (t >= last_start * (1.0 - 1e-12)) last_max = std::max(last_max, g);
      interior = std::max(interior, prof.cwiseAbs().maxCoeff());
      const double e = std::max(std::abs(prof(0)), std::abs(prof(n - 1)));
      if (e > edge) {
        edge = e;
        edge_at = {layer, t, std::abs(prof(0)) >= std::abs(prof(n - 1)) ? state.x(0) : state.x(n - 1)};
      }
    }
  }
  const double growth = std::max(0.0, last_max - 2.0 * first_max);
  if (growth > 0.0) {
    r.worst_violation = growth;
    r.where = {};
  }
  const double edge_excess = std::max(0.0, edge - edge_ratio * interior);
  if (edge_excess > r.worst_violation) {
    r.worst_violation = edge_excess;
    r.where = edge_at;
  }
  r.notes = "sup_dx=" + fmt(overall) + " first_window=" + fmt(first_max) + " last_window=" + fmt(last_max) +
            " edge=" + fmt(edge) + " interior=" + fmt(interior);
  finish(r);
  return r;
}

CheckReport check_solution_stability(const SystemState& state, const InitialData& data, const ModelParams& p,
                                     const GridSpec& grid, const PicardConfig& cfg, const std::vector<double>& eps) {
  CheckReport r = named("solution_stability");
  r.tolerance = 0.0;
  if (state.levels() != grid.nt) throw ConfigError("stability check needs a single-window state");
  const double t0 = state.times(0);
  const SpatialGrid sg{grid.half_width, grid.nx};
  const Eigen::MatrixXd& y = state.y1;
  Eigen::MatrixXd F(grid.nt, grid.nx);
  for (int k = 0; k < grid.nt; ++k)
    for (int j = 0; j < grid.nx; ++j) F(k, j) = reaction_f(1, y(k, j), state.u1(k, j), state.u2(k, j), p);
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMatrix Frm = F;
  const Eigen::VectorXd src = Eigen::Map<const Eigen::VectorXd>(Frm.data(), Frm.size());
  const Eigen::VectorXd u0 = state.u1.row(0).transpose();
  const ParabolicCoefficients base =
      assemble_coefficients(1, y, sup_norm(data.y0_1), lipschitz_norm(data.y0_1, grid.dx()), p, grid, t0);
  KernelOptions ko;
  ko.horizon = grid.T;
  ko.quad = cfg.quad;
  ko.levi_depth = cfg.levi_depth;

  auto solve = [&](double e) {
    ParabolicCoefficients pc = base;
    const CoefficientField a0 = base.a;
    // Smooth bounded perturbation of the diffusion coefficient.
    pc.a = CoefficientField::analytic([a0, e](double x, double t) { return a0(x, t) + e * 0.5 * std::cos(0.4 * x) * std::exp(-x * x / 32.0); });
    pc.lambda0 = std::max(1e-6, base.lambda0 - 0.5 * e);
    pc.lambda1 = base.lambda1 + 0.5 * e;
    const DuhamelOperators ops(KernelHandle(pc, ko), sg, t0, grid.dt(), grid.nt - 1);
    const Eigen::VectorXd w = ops.represent(u0, &src);
    return Eigen::MatrixXd(Eigen::Map<const RowMatrix>(w.data(), grid.nt, grid.nx));
  };
  const Eigen::MatrixXd ref = solve(0.0);
  std::vector<double> gaps;
  for (double e : eps) gaps.push_back(holder_norm_estimate(solve(e) - ref, grid.dx(), grid.dt(), cfg.seed));
  std::ostringstream n;
  n << "gaps=";
  for (size_t i = 0; i < gaps.size(); ++i) n << (i ? "," : "") << fmt(gaps[i]);
  for (size_t i = 1; i < gaps.size(); ++i) {
    const double excess = std::max(0.0, gaps[i] - 0.8 * gaps[i - 1]);
    if (excess > r.worst_violation) r.worst_violation = excess;
  }
  if (gaps.size() >= 2 && eps.front() > 0.0) {
    // Linear plus square-root envelope fitted on the first eps, tested on the rest.
    const double K = gaps.front() / (eps.front() + std::sqrt(eps.front()));
    for (size_t i = 1; i < gaps.size(); ++i) {
      const double excess = std::max(0.0, gaps[i] - K * (eps[i] + std::sqrt(eps[i])));
      if (excess > r.worst_violation) r.worst_violation = excess;
    }
    n << " K=" << fmt(K);
  }
  r.notes = n.str();
  finish(r);
  return r;
}

std::string reports_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream out;
  out << "name,passed,worst_violation,layer,t,x,tolerance,notes\n";
  for (const CheckReport& r : reports)
    out << r.name << ',' << (r.passed ? 1 : 0) << ',' << fmt(r.worst_violation) << ',' << r.where.layer << ','
        << fmt(r.where.t) << ',' << fmt(r.where.x) << ',' << fmt(r.tolerance) << ",\"" << r.notes << "\"\n";
  return out.str();
}

std::string reports_text(const std::vector<CheckReport>& reports) {
  std::ostringstream out;
  for (const CheckReport& r : reports) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-22s %s  violation=%.3e tol=%.1e", r.name.c_str(), r.passed ? "PASS" : "FAIL",
                  r.worst_violation, r.tolerance);
    out << buf;
    if (!r.notes.empty()) out << "  " << r.notes;
    out << '\n';
  }
  return out.str();
}

}  // namespace pfront
