#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "porous_front/errors.hpp"
#include "porous_front/pipeline.hpp"

using namespace pfront;

namespace {

std::vector<std::vector<double>> parse_rows(const std::string& csv, std::string* header = nullptr) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> r;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) r.push_back(std::stod(cell));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST_CASE("scenario parsing: defaults, overrides, errors") {
  const Scenario d = parse_scenario("");
  CHECK(d.name == "default");
  CHECK(d.seed == 0);
  CHECK(d.checks == Scenario::all_checks());
  CHECK(d.params.lambda[1] == 0.8);

  const Scenario s = parse_scenario(R"(
name = "custom"
seed = 7
checks = ["sector"]
[data]
kind = "plateau"
u_value = [0.2, 0.1]
[grid]
nx = 41
T = 0.1
[picard]
levi_depth = 4
n_space = 33
[kernel]
coefficients = "constant"
a = 2
)");
  CHECK(s.name == "custom");
  CHECK(s.picard.seed == 7);
  CHECK(s.checks.size() == 1);
  CHECK(s.grid.nx == 41);
  CHECK(s.picard.levi_depth == 4);
  CHECK(s.picard.quad.n_space == 33);
  CHECK(s.kernel.a == 2.0);
  const InitialData data = s.initial_data();
  CHECK(data.u0_2.maxCoeff() == 0.1);
  CHECK(data.x.size() == 41);

  CHECK_THROWS_AS(parse_scenario("[kernel]\nlevi_depth = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("[picard]\nlevi_depth = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("[grid]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("checks = [\"nope\"]\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("[data]\nkind = \"square\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("[data]\nu_width = [0.0, 1.0]\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("[params]\nq = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("[params]\nlambda = [1.0]\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("[grid]\nnx = \"many\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("name = \n"), ConfigError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.toml"), ConfigError);
}

TEST_CASE("fixed-width float formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(fmt17(v)) == v);
  const std::string ts = iso_timestamp();
  CHECK(ts.size() == 20);
  CHECK(ts[10] == 'T');
  CHECK(ts.back() == 'Z');
}

TEST_CASE("zero data: zero trajectory and zero gap") {
  Scenario sc;
  sc.data.kind = "zero";
  sc.horizon = 0.5;
  const SolveOutput s = run_solve(sc);
  CHECK(s.result.state.u1.cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.result.state.u2.cwiseAbs().maxCoeff() == 0.0);
  const CompareOutput c = run_compare(sc);
  CHECK(c.gap_u1 == 0.0);
  CHECK(c.gap_u2 == 0.0);
  sc.checks = {"sector", "fuel"};
  for (const CheckReport& r : run_checks(sc, s)) CHECK(r.passed);
}

TEST_CASE("default solve: CSV layout, envelope dominance, determinism") {
  Scenario sc;
  sc.horizon = 0.5;
  const SolveOutput a = run_solve(sc);
  std::string header;
  const std::string traj = trajectory_csv(a.result.state);
  const auto rows = parse_rows(traj, &header);
  CHECK(header == "t,x,u1,u2,y1,y2");
  CHECK(rows.size() == static_cast<size_t>(a.result.state.levels() * sc.grid.nx));
  const auto norms = parse_rows(norms_csv(a.result.state, a.envelope, 2.0), &header);
  CHECK(header == "t,sup_u1,sup_u2,lp_u1,lp_u2,sup_dx_u1,sup_dx_u2,phi");
  for (const auto& r : norms) {
    CHECK(r[7] >= r[1]);
    CHECK(r[7] >= r[2]);
  }
  const SolveOutput b = run_solve(sc);
  CHECK(trajectory_csv(b.result.state) == traj);
  CHECK(iterations_csv(b.result) == iterations_csv(a.result));
}

TEST_CASE("compare: default scenario gap and refinement evidence") {
  Scenario sc;
  const CompareOutput c = run_compare(sc);
  CHECK(c.gap <= 5e-2);
  const std::string csv = compare_csv(c);
  CHECK(csv.rfind("x,u1_picard,u1_fd,u2_picard,u2_fd\n", 0) == 0);
  CHECK(csv.find("\nsummary,") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == sc.grid.nx + 2);

  // The 8x reference sits closer to the 4x one than the 4x one sits to the 2x one.
  auto fd_final = [&](int refine) {
    Scenario r = sc;
    r.fd.refine_x = refine;
    r.fd.refine_t = refine * refine;
    const SystemState s = fd_solve(r.initial_data(refine), r.params, r.fd_config(sc.grid.T));
    return subsample(s, refine, s.levels() - 1);
  };
  const SystemState f2 = fd_final(2), f4 = fd_final(4), f8 = fd_final(8);
  const double g24 = (f2.u1.row(1) - f4.u1.row(1)).cwiseAbs().maxCoeff();
  const double g48 = (f4.u1.row(1) - f8.u1.row(1)).cwiseAbs().maxCoeff();
  CHECK(g48 < g24);
}

TEST_CASE("kernel self-test rows") {
  KernelSpec k;
  k.coefficients = "constant";
  k.a = 2.0;
  const std::vector<SelftestRow> rows = kernel_selftest(k);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].name == "exactness");
  CHECK(rows[0].value <= 1e-12);
  for (const SelftestRow& r : rows) CHECK(r.passed);
  CHECK(selftest_csv(rows).rfind("name,passed,value,tolerance,notes\n", 0) == 0);
  k.coefficients = "wavy";
  CHECK_THROWS_AS(kernel_selftest(k), ConfigError);
}
