#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "porous_front/fdref.hpp"
#include "porous_front/kernel.hpp"
#include "porous_front/model.hpp"
#include "porous_front/solver.hpp"

namespace pfront {

/// Analytic initial profiles sampled onto any grid.
struct DataSpec {
  std::string kind = "gaussian-bump";  ///< gaussian-bump | plateau | zero
  std::array<double, 2> u_amp{0.8, 0.5};
  std::array<double, 2> u_center{0.0, 0.5};
  std::array<double, 2> u_width{1.0, 1.2};
  std::array<double, 2> u_value{0.0, 0.0};  ///< plateau levels
  std::array<double, 2> y_level{1.0, 0.8};
  std::array<double, 2> y_bump{0.2, 0.0};

  InitialData sample(const Eigen::VectorXd& x) const;
};

/// Operator used by the kernel self-test.
struct KernelSpec {
  std::string coefficients = "smooth";  ///< smooth | constant
  double a = 1.0, b = 0.0, c = 0.0;     ///< constant case
  double horizon = 0.5;
  std::optional<int> levi_depth;
  QuadraturePolicy quad;

  ParabolicCoefficients coefficients_field() const;
  KernelOptions options() const;
};

struct FdSpec {
  int refine_x = 4;
  int refine_t = 16;
  double theta = 0.5;
};

struct VerifySpec {
  double tol = 1e-8;
  double delta = 1e-3;
  std::vector<double> lp{2.0, 4.0};
  std::array<double, 3> stability_eps{0.1, 0.05, 0.025};
};

struct Scenario {
  std::string name = "default";
  ModelParams params = ModelParams::synthetic_default();
  DataSpec data;
  GridSpec grid;
  PicardConfig picard;
  FdSpec fd;
  KernelSpec kernel;
  VerifySpec verify;
  double horizon = 0.75;
  std::uint64_t seed = 0;
  std::vector<std::string> checks = all_checks();
  std::string output_dir = "out";
  bool inject_fault = false;  ///< corrupts one solved node before the checks run

  static std::vector<std::string> all_checks();

  InitialData initial_data(int refine = 1) const;
  /// Reference configuration covering [0, t_end] at the scenario refinement.
  FdConfig fd_config(double t_end) const;
  void validate() const;
};

/// Parses TOML text; unknown keys and invalid values raise ConfigError.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

}  // namespace pfront
