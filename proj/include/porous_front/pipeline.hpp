#pragma once

#include <string>
#include <vector>

#include "porous_front/scenario.hpp"
#include "porous_front/verify.hpp"

namespace pfront {

/// One row of the kernel self-test.
struct SelftestRow {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string notes;
};

/// Mass, delta-family, exactness, advection-shift and residual checks.
std::vector<SelftestRow> kernel_selftest(const KernelSpec& spec);

struct SolveOutput {
  InitialData data;
  UpperSolution envelope;
  GlobalResult result;
};

SolveOutput run_solve(const Scenario& sc);

struct CompareOutput {
  SystemState picard;
  SystemState fd;  ///< subsampled onto the solver grid
  double gap_u1 = 0.0;  ///< relative sup gap at the final time
  double gap_u2 = 0.0;
  double gap = 0.0;  ///< relative sup gap over the whole window
};

CompareOutput run_compare(const Scenario& sc);

/// Runs every check named in the scenario against a solved trajectory.
std::vector<CheckReport> run_checks(const Scenario& sc, const SolveOutput& solved);

/// Rows 0..levels-1 of a trajectory.
SystemState leading_levels(const SystemState& s, Eigen::Index levels);

std::string selftest_csv(const std::vector<SelftestRow>& rows);
std::string trajectory_csv(const SystemState& s);
std::string norms_csv(const SystemState& s, const UpperSolution& env, double p);
std::string compare_csv(const CompareOutput& c);
std::string iterations_csv(const GlobalResult& r);

/// ISO-8601 UTC timestamp.
std::string iso_timestamp();

/// %.17g formatting.
std::string fmt17(double v);

}  // namespace pfront
