#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "porous_front/errors.hpp"
#include "porous_front/pipeline.hpp"

namespace fs = std::filesystem;
using namespace pfront;

namespace {

struct Output {
  fs::path dir;
  std::string command;
  std::string scenario_path;
  std::vector<std::string> files;

  void write(const std::string& name, const std::string& body) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + (dir / name).string());
    f << body;
    files.push_back(name);
  }

  void metadata(const Scenario& sc, int status) const {
    nlohmann::json meta = {{"command", command},   {"scenario", scenario_path}, {"name", sc.name},
                           {"seed", sc.seed},      {"timestamp", iso_timestamp()}, {"exit_status", status},
                           {"files", files}};
    std::ofstream f(dir / ("metadata_" + command + ".json"));
    f << meta.dump(2) << '\n';
  }
};

int cmd_kernel_selftest(const Scenario& sc, Output& out, bool verbose) {
  const std::vector<SelftestRow> rows = kernel_selftest(sc.kernel);
  out.write("kernel_selftest.csv", selftest_csv(rows));
  bool ok = true;
  for (const SelftestRow& r : rows) {
    ok = ok && r.passed;
    if (verbose || !r.passed)
      std::fprintf(stderr, "%-16s %s value=%.3e tol=%.1e %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.value,
                   r.tolerance, r.notes.c_str());
  }
  return ok ? 0 : 1;
}

void emit_solve(const SolveOutput& s, const Scenario& sc, Output& out, bool verbose) {
  out.write("trajectory.csv", trajectory_csv(s.result.state));
  out.write("norms.csv", norms_csv(s.result.state, s.envelope, sc.grid.p));
  if (verbose) {
    out.write("iterations.csv", iterations_csv(s.result));
    for (const WindowSummary& w : s.result.windows)
      std::fprintf(stderr, "window t_end=%.6g iterations=%zu shrinks=%d residual=%.3e\n", w.t_end,
                   w.report.iterations.size(), w.report.shrinks, w.report.fixed_point_residual);
  }
}

int cmd_solve(const Scenario& sc, Output& out, bool verbose) {
  emit_solve(run_solve(sc), sc, out, verbose);
  return 0;
}

int cmd_compare(const Scenario& sc, Output& out, bool verbose) {
  const CompareOutput c = run_compare(sc);
  out.write("compare.csv", compare_csv(c));
  if (verbose) std::fprintf(stderr, "relative sup gap u1=%.3e u2=%.3e window=%.3e\n", c.gap_u1, c.gap_u2, c.gap);
  return 0;
}

int cmd_verify(const Scenario& sc, Output& out, bool verbose) {
  const SolveOutput s = run_solve(sc);
  emit_solve(s, sc, out, verbose);
  const std::vector<CheckReport> reports = run_checks(sc, s);
  out.write("checks.csv", reports_csv(reports));
  bool ok = true;
  for (const CheckReport& r : reports) ok = ok && r.passed;
  if (verbose || !ok) std::cerr << reports_text(reports);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-layer porous-medium combustion front solver"};
  app.require_subcommand(1);
  std::string scenario_path, out_dir;
  bool verbose = false;
  std::vector<std::pair<std::string, int (*)(const Scenario&, Output&, bool)>> commands = {
      {"kernel-selftest", cmd_kernel_selftest},
      {"solve", cmd_solve},
      {"compare", cmd_compare},
      {"verify", cmd_verify}};
  for (const auto& [name, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--scenario", scenario_path, "scenario TOML file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--verbose", verbose, "per-iteration diagnostics");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  std::string command;
  int (*fn)(const Scenario&, Output&, bool) = nullptr;
  for (const auto& [name, f] : commands)
    if (app.got_subcommand(name)) command = name, fn = f;

  Scenario sc;
  try {
    sc = load_scenario(scenario_path);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }
  Output out{out_dir.empty() ? fs::path(sc.output_dir) : fs::path(out_dir), command, scenario_path, {}};
  int status = 1;
  try {
    fs::create_directories(out.dir);
    status = fn(sc, out, verbose);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    status = 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    status = 1;
  }
  try {
    out.metadata(sc, status);
  } catch (const std::exception& e) {
    std::cerr << "cannot write metadata: " << e.what() << '\n';
  }
  return status;
}
