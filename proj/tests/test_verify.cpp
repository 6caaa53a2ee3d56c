#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "porous_front/errors.hpp"
#include "porous_front/pipeline.hpp"
#include "porous_front/verify.hpp"

using namespace pfront;

namespace {

const Scenario& scenario() {
  static const Scenario sc;
  return sc;
}

const SolveOutput& solved_one_window() {
  static const SolveOutput s = [] {
    Scenario sc = scenario();
    sc.horizon = sc.grid.T;
    return run_solve(sc);
  }();
  return s;
}

}  // namespace

TEST_CASE("sector check passes on the solution and locates corruption") {
  const SolveOutput& s = solved_one_window();
  const CheckReport ok = check_sector(s.result.state, s.envelope, 1e-8);
  CHECK(ok.passed);
  CHECK(ok.worst_violation <= 1e-8);

  SystemState bad = s.result.state;
  bad.u2(4, 10) = -0.25;
  const CheckReport low = check_sector(bad, s.envelope, 1e-8);
  CHECK_FALSE(low.passed);
  CHECK(low.worst_violation == doctest::Approx(0.25));
  CHECK(low.where.layer == 2);
  CHECK(low.where.t == bad.times(4));
  CHECK(low.where.x == bad.x(10));

  bad = s.result.state;
  bad.u1(2, 40) = phi_upper(bad.times(2), s.envelope) + 0.1;
  CHECK(check_sector(bad, s.envelope, 1e-8).worst_violation == doctest::Approx(0.1));
}

TEST_CASE("fuel check rejects growth, negativity and excess") {
  const SolveOutput& s = solved_one_window();
  CHECK(check_fuel(s.result.state, s.data, 1e-8).passed);
  SystemState bad = s.result.state;
  bad.y1(5, 20) = bad.y1(4, 20) + 1e-3;
  const CheckReport grow = check_fuel(bad, s.data, 1e-8);
  CHECK_FALSE(grow.passed);
  CHECK(grow.where.layer == 1);
  bad = s.result.state;
  bad.y2(3, 3) = -1e-6;
  CHECK_FALSE(check_fuel(bad, s.data, 1e-8).passed);
  bad = s.result.state;
  bad.y2(0, 3) = 2.0;
  CHECK_FALSE(check_fuel(bad, s.data, 1e-8).passed);
}

TEST_CASE("Lp envelope holds on the solution and fails for explosive growth") {
  const SolveOutput& s = solved_one_window();
  for (double p : {2.0, 4.0}) CHECK(check_lp_envelope(s.result.state, s.data, scenario().params, p, 1e-8).passed);
  SystemState bad = s.result.state;
  bad.u1.bottomRows(1) *= 50.0;
  const CheckReport r = check_lp_envelope(bad, s.data, scenario().params, 2.0, 1e-8);
  CHECK_FALSE(r.passed);
  CHECK(r.where.t == bad.times(bad.levels() - 1));
}

TEST_CASE("gradient check flags edge mass and growth") {
  const SolveOutput& s = solved_one_window();
  const std::vector<double> ends{s.result.windows.front().t_end};
  CHECK(check_gradient_bound(s.result.state, ends).passed);
  SystemState edge = s.result.state;
  edge.u1(3, 0) = 0.2;
  const CheckReport e = check_gradient_bound(edge, ends);
  CHECK_FALSE(e.passed);
  CHECK(e.where.x == edge.x(0));

  SystemState steep = s.result.state;
  const double mid = steep.times(5);
  steep.u2.row(steep.levels() - 1).segment(40, 1).array() += 5.0;
  CHECK_FALSE(check_gradient_bound(steep, {mid, ends.front()}).passed);
}

TEST_CASE("comparison check orders the perturbed solves with a linear gap") {
  const Scenario& sc = scenario();
  const CheckReport r = check_comparison(sc.initial_data(), sc.params, sc.grid, sc.picard, 1e-3, 1e-8);
  CHECK(r.passed);
  CHECK(r.notes.find("ratio=") != std::string::npos);
  CHECK_THROWS_AS(check_comparison(sc.initial_data(), sc.params, sc.grid, sc.picard, -1.0, 1e-8), ConfigError);
}

TEST_CASE("solution stability gaps shrink with the coefficient perturbation") {
  const Scenario& sc = scenario();
  const SolveOutput& s = solved_one_window();
  const CheckReport r =
      check_solution_stability(s.result.state, s.data, sc.params, sc.grid, sc.picard, {0.1, 0.05, 0.025});
  CHECK(r.passed);
  // Growing perturbations violate the decay requirement.
  CHECK_FALSE(check_solution_stability(s.result.state, s.data, sc.params, sc.grid, sc.picard, {0.025, 0.05, 0.1}).passed);
}

TEST_CASE("run_checks honours the check list and the fault flag") {
  Scenario sc = scenario();
  sc.horizon = sc.grid.T;
  sc.checks = {"sector", "fuel", "lp_envelope", "gradient_bound"};
  const std::vector<CheckReport> ok = run_checks(sc, solved_one_window());
  REQUIRE(ok.size() == 5);
  for (const CheckReport& r : ok) CHECK(r.passed);
  sc.inject_fault = true;
  const std::vector<CheckReport> bad = run_checks(sc, solved_one_window());
  CHECK(bad[0].name == "sector");
  CHECK_FALSE(bad[0].passed);
  CHECK(bad[1].passed);
  const std::string csv = reports_csv(bad);
  CHECK(csv.rfind("name,passed,worst_violation,layer,t,x,tolerance,notes\n", 0) == 0);
  CHECK(csv.find("sector,0,") != std::string::npos);
  CHECK(reports_text(bad).find("FAIL") != std::string::npos);
}
