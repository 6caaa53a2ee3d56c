#include "porous_front/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <numbers>
#include <sstream>

#include "porous_front/errors.hpp"

namespace pfront {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

namespace {

SelftestRow row(std::string name, double value, double tol, std::string notes = "") {
  return {std::move(name), value, tol, value <= tol, std::move(notes)};
}

double moving_gaussian(double a, double b, double x, double s) {
  const double d = x - b * s;
  return std::exp(-d * d / (4 * a * s)) / std::sqrt(4 * std::numbers::pi * a * s);
}

}  // namespace

std::vector<SelftestRow> kernel_selftest(const KernelSpec& spec) {
  std::vector<SelftestRow> rows;
  const ParabolicCoefficients pc = spec.coefficients_field();
  const KernelOptions opts = spec.options();
  const double a_const = spec.coefficients == "constant" ? spec.a : 1.0;
  const double s_max = spec.horizon;

  {
    KernelHandle h(ParabolicCoefficients::heat(a_const), opts);
    double gap = 0.0;
    for (int i = 0; i < 5; ++i)
      for (int k = 1; k <= 4; ++k) {
        const double x = -1.0 + 0.5 * i, s = s_max * k / 4.0;
        gap = std::max(gap, std::abs(eval_gamma(h, x, s, 0.1, 0.0) - eval_Z(h.coeffs(), x, s, 0.1, 0.0)));
      }
    rows.push_back(row("exactness", gap, 1e-12));
  }
  {
    const double b = spec.coefficients == "constant" && spec.b != 0.0 ? spec.b : 1.5;
    ParabolicCoefficients adv = ParabolicCoefficients::heat(a_const);
    adv.b = CoefficientField::constant(b);
    KernelHandle h(adv, opts);
    double err = 0.0;
    for (double f : {0.1, 0.5, 1.0})
      for (double x : {-1.0, 0.0, 0.5, 1.5}) {
        const double s = f * s_max;
        err = std::max(err, std::abs(eval_gamma(h, x, s, 0.0, 0.0) - moving_gaussian(a_const, b, x, s)));
      }
    rows.push_back(row("advection_shift", err, 1e-6, "depth=" + std::to_string(h.levi_depth())));
  }

  KernelOptions coarse = opts;
  coarse.quad = QuadraturePolicy::coarse();
  KernelHandle hc(pc, coarse);
  {
    const double width = 8.0 * std::sqrt(2.0 * pc.lambda1 * s_max) + 1.0;
    const QuadratureRule r = trapezoid(161, -width, width);
    double worst = 0.0;
    for (double f : {0.04, 0.3, 1.0})
      for (double x : {-0.5, 0.7}) {
        double mass = 0.0;
        for (Eigen::Index i = 0; i < r.size(); ++i) mass += r.weights(i) * eval_gamma(hc, x, f * s_max, r.nodes(i), 0.0);
        worst = std::max(worst, std::abs(mass - 1.0));
      }
    rows.push_back(row("mass", worst, 1e-3));
  }
  {
    KernelHandle h(pc, opts);
    const SpatialGrid wide{4 * std::numbers::pi, 161};
    const Eigen::VectorXd psi = wide.nodes().array().cos();
    std::vector<double> errs;
    for (double f : {0.2, 0.1, 0.05})
      errs.push_back((apply_gamma(h, wide, psi, f * s_max, 0.0) - psi).cwiseAbs().maxCoeff());
    const bool decreasing = errs[1] < errs[0] && errs[2] < errs[1];
    SelftestRow r = row("delta_family", errs.back(), 0.05,
                        "errors=" + fmt17(errs[0]) + ";" + fmt17(errs[1]) + ";" + fmt17(errs[2]));
    r.passed = r.passed && decreasing;
    rows.push_back(r);
  }
  {
    KernelHandle h(pc, opts);
    const double x = 0.5, t = 0.6 * s_max;
    auto residual = [&](double hx) {
      const double ht = hx * hx;
      auto G = [&](double xx, double tt) { return eval_gamma(h, xx, tt, 0.0, 0.0); };
      const double gt = (G(x, t + ht) - G(x, t - ht)) / (2 * ht);
      const double gx = (G(x + hx, t) - G(x - hx, t)) / (2 * hx);
      const double gxx = (G(x + hx, t) - 2 * G(x, t) + G(x - hx, t)) / (hx * hx);
      return std::abs(gt - pc.a(x, t) * gxx + pc.b(x, t) * gx + pc.c(x, t) * G(x, t));
    };
    const double r1 = residual(0.1), r2 = residual(0.05);
    SelftestRow r = row("residual", r2, 1e-2, "coarse=" + fmt17(r1));
    r.passed = r.passed && (r2 < 0.5 * r1 || r2 < 1e-8);
    rows.push_back(r);
  }
  return rows;
}

SolveOutput run_solve(const Scenario& sc) {
  SolveOutput out;
  out.data = sc.initial_data();
  out.envelope = UpperSolution::from_data(out.data, sc.params);
  out.result = continue_global(out.data, sc.params, sc.grid, sc.picard, sc.horizon);
  return out;
}

CompareOutput run_compare(const Scenario& sc) {
  CompareOutput c;
  const PicardResult pr = picard_solve(sc.initial_data(), sc.params, sc.grid, sc.picard);
  c.picard = pr.state;
  const FdConfig fc = sc.fd_config(pr.report.T_used);
  c.fd = subsample(fd_solve(sc.initial_data(sc.fd.refine_x), sc.params, fc), sc.fd.refine_x, sc.fd.refine_t);
  const Eigen::Index last = c.picard.levels() - 1;
  auto rel = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double scale) {
    const double g = (a - b).cwiseAbs().maxCoeff();
    return scale > 0.0 ? g / scale : g;
  };
  const double scale = std::max(c.fd.u1.cwiseAbs().maxCoeff(), c.fd.u2.cwiseAbs().maxCoeff());
  c.gap_u1 = rel(c.picard.u1.row(last), c.fd.u1.row(last), c.fd.u1.row(last).cwiseAbs().maxCoeff());
  c.gap_u2 = rel(c.picard.u2.row(last), c.fd.u2.row(last), c.fd.u2.row(last).cwiseAbs().maxCoeff());
  c.gap = std::max(rel(c.picard.u1, c.fd.u1, scale), rel(c.picard.u2, c.fd.u2, scale));
  return c;
}

SystemState leading_levels(const SystemState& s, Eigen::Index levels) {
  SystemState o;
  o.times = s.times.head(levels);
  o.x = s.x;
  o.u1 = s.u1.topRows(levels);
  o.u2 = s.u2.topRows(levels);
  o.I1 = s.I1.topRows(levels);
  o.I2 = s.I2.topRows(levels);
  o.y1 = s.y1.topRows(levels);
  o.y2 = s.y2.topRows(levels);
  return o;
}

std::vector<CheckReport> run_checks(const Scenario& sc, const SolveOutput& solved) {
  std::vector<CheckReport> out;
  SystemState state = solved.result.state;
  if (sc.inject_fault) {
    const Eigen::Index k = state.levels() / 2, j = state.x.size() / 2;
    state.u1(k, j) = -0.5 - std::abs(state.u1(k, j));
  }
  std::vector<double> ends;
  for (const WindowSummary& w : solved.result.windows) ends.push_back(w.t_end);
  for (const std::string& name : sc.checks) {
    if (name == "sector") {
      out.push_back(check_sector(state, solved.envelope, sc.verify.tol));
    } else if (name == "fuel") {
      out.push_back(check_fuel(state, solved.data, sc.verify.tol));
    } else if (name == "comparison") {
      out.push_back(check_comparison(solved.data, sc.params, sc.grid, sc.picard, sc.verify.delta, sc.verify.tol));
    } else if (name == "lp_envelope") {
      for (double p : sc.verify.lp) out.push_back(check_lp_envelope(state, solved.data, sc.params, p, sc.verify.tol));
    } else if (name == "gradient_bound") {
      out.push_back(check_gradient_bound(state, ends));
    } else if (name == "solution_stability") {
      GridSpec g = sc.grid;
      g.T = ends.empty() ? sc.grid.T : ends.front();
      const std::vector<double> eps(sc.verify.stability_eps.begin(), sc.verify.stability_eps.end());
      out.push_back(check_solution_stability(leading_levels(state, g.nt), solved.data, sc.params, g, sc.picard, eps));
    } else {
      throw ConfigError("unknown check: " + name);
    }
  }
  return out;
}

std::string selftest_csv(const std::vector<SelftestRow>& rows) {
  std::ostringstream o;
  o << "name,passed,value,tolerance,notes\n";
  for (const SelftestRow& r : rows)
    o << r.name << ',' << (r.passed ? 1 : 0) << ',' << fmt17(r.value) << ',' << fmt17(r.tolerance) << ",\"" << r.notes
      << "\"\n";
  return o.str();
}

std::string trajectory_csv(const SystemState& s) {
  std::ostringstream o;
  o << "t,x,u1,u2,y1,y2\n";
  for (Eigen::Index k = 0; k < s.levels(); ++k)
    for (Eigen::Index j = 0; j < s.x.size(); ++j)
      o << fmt17(s.times(k)) << ',' << fmt17(s.x(j)) << ',' << fmt17(s.u1(k, j)) << ',' << fmt17(s.u2(k, j)) << ','
        << fmt17(s.y1(k, j)) << ',' << fmt17(s.y2(k, j)) << '\n';
  return o.str();
}

std::string norms_csv(const SystemState& s, const UpperSolution& env, double p) {
  std::ostringstream o;
  o << "t,sup_u1,sup_u2,lp_u1,lp_u2,sup_dx_u1,sup_dx_u2,phi\n";
  for (Eigen::Index k = 0; k < s.levels(); ++k) {
    const Eigen::VectorXd u1 = s.u1.row(k).transpose(), u2 = s.u2.row(k).transpose();
    o << fmt17(s.times(k)) << ',' << fmt17(sup_norm(u1)) << ',' << fmt17(sup_norm(u2)) << ','
      << fmt17(lp_norm(u1, s.dx(), p)) << ',' << fmt17(lp_norm(u2, s.dx(), p)) << ',' << fmt17(sup_dx(u1, s.dx()))
      << ',' << fmt17(sup_dx(u2, s.dx())) << ',' << fmt17(phi_upper(s.times(k), env)) << '\n';
  }
  return o.str();
}

std::string compare_csv(const CompareOutput& c) {
  std::ostringstream o;
  o << "x,u1_picard,u1_fd,u2_picard,u2_fd\n";
  const Eigen::Index last = c.picard.levels() - 1;
  for (Eigen::Index j = 0; j < c.picard.x.size(); ++j)
    o << fmt17(c.picard.x(j)) << ',' << fmt17(c.picard.u1(last, j)) << ',' << fmt17(c.fd.u1(last, j)) << ','
      << fmt17(c.picard.u2(last, j)) << ',' << fmt17(c.fd.u2(last, j)) << '\n';
  o << "summary," << fmt17(c.gap_u1) << ",," << fmt17(c.gap_u2) << ",\n";
  return o.str();
}

std::string iterations_csv(const GlobalResult& r) {
  std::ostringstream o;
  o << "window,attempt,iteration,gap,holder_u1,holder_u2,u_min,u_max\n";
  for (const WindowSummary& w : r.windows)
    for (const IterationRecord& it : w.report.iterations)
      o << it.window << ',' << it.attempt << ',' << it.iteration << ',' << fmt17(it.gap) << ',' << fmt17(it.holder[0])
        << ',' << fmt17(it.holder[1]) << ',' << fmt17(it.u_min) << ',' << fmt17(it.u_max) << '\n';
  return o.str();
}

}  // namespace pfront
