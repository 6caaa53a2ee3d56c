#include "porous_front/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "porous_front/errors.hpp"

namespace pfront {

InitialData DataSpec::sample(const Eigen::VectorXd& x) const {
  InitialData d;
  d.x = x;
  const Eigen::Index n = x.size();
  std::array<Eigen::VectorXd, 2> u, y;
  for (int i = 0; i < 2; ++i) {
    if (kind == "gaussian-bump") {
      if (!(u_width[i] > 0.0) || u_amp[i] < 0.0) throw ConfigError("gaussian-bump needs width > 0 and height >= 0");
      u[i] = u_amp[i] * (-(x.array() - u_center[i]).square() / (2.0 * u_width[i] * u_width[i])).exp();
    } else if (kind == "plateau") {
      u[i] = Eigen::VectorXd::Constant(n, u_value[i]);
    } else if (kind == "zero") {
      u[i] = Eigen::VectorXd::Zero(n);
    } else {
      throw ConfigError("unknown data kind: " + kind);
    }
    y[i] = (y_level[i] + y_bump[i] * (-x.array().square() / 4.0).exp()).matrix();
  }
  d.u0_1 = u[0];
  d.u0_2 = u[1];
  d.y0_1 = y[0];
  d.y0_2 = y[1];
  for (const auto* v : {&d.u0_1, &d.u0_2, &d.y0_1, &d.y0_2}) d.lip_bound = std::max(d.lip_bound, lipschitz_estimate(*v, d.dx()));
  d.validate();
  return d;
}

ParabolicCoefficients KernelSpec::coefficients_field() const {
  if (coefficients == "constant") {
    ParabolicCoefficients pc = ParabolicCoefficients::heat(a);
    pc.b = CoefficientField::constant(b);
    pc.c = CoefficientField::constant(c);
    return pc;
  }
  if (coefficients == "smooth") {
    ParabolicCoefficients pc;
    pc.a = CoefficientField::analytic([](double x, double t) { return 1.0 + 0.3 * std::sin(x) * std::exp(-t); });
    pc.b = CoefficientField::analytic([](double x, double) { return 0.2 * std::cos(x); });
    pc.c = CoefficientField::constant(0.0);
    pc.lambda0 = 0.7;
    pc.lambda1 = 1.3;
    return pc;
  }
  throw ConfigError("unknown kernel coefficients: " + coefficients);
}

KernelOptions KernelSpec::options() const {
  KernelOptions o;
  o.horizon = horizon;
  o.levi_depth = levi_depth;
  o.quad = quad;
  return o;
}

InitialData Scenario::initial_data(int refine) const {
  GridSpec g = grid;
  g.nx = refine * (grid.nx - 1) + 1;
  return data.sample(g.nodes());
}

FdConfig Scenario::fd_config(double t_end) const {
  FdConfig c;
  c.nx = fd.refine_x * (grid.nx - 1) + 1;
  const double steps = std::ceil(t_end / grid.dt() - 1e-9);
  c.nt = static_cast<int>(steps) * fd.refine_t + 1;
  c.T = t_end;
  c.theta = fd.theta;
  return c;
}

std::vector<std::string> Scenario::all_checks() {
  return {"sector", "fuel", "comparison", "lp_envelope", "gradient_bound", "solution_stability"};
}

void Scenario::validate() const {
  const std::vector<std::string> known = all_checks();
  for (const std::string& c : checks)
    if (std::find(known.begin(), known.end(), c) == known.end()) throw ConfigError("unknown check: " + c);
  params.validate();
  grid.validate();
  picard.validate();
  kernel.quad.validate();
  if (kernel.levi_depth && *kernel.levi_depth < 1) throw ConfigError("kernel.levi_depth must be >= 1");
  if (!(kernel.horizon > 0.0)) throw ConfigError("kernel.horizon must be positive");
  if (fd.refine_x < 1 || fd.refine_t < 1) throw ConfigError("fd refinement factors must be >= 1");
  if (!(fd.theta >= 0.0 && fd.theta <= 1.0)) throw ConfigError("fd.theta must lie in [0, 1]");
  if (!(horizon > 0.0)) throw ConfigError("run.horizon must be positive");
  if (!(verify.delta > 0.0) || !(verify.tol > 0.0)) throw ConfigError("verify tolerances must be positive");
  for (double p : verify.lp)
    if (!(p > 1.0)) throw ConfigError("verify.lp exponents must exceed 1");
  for (double e : verify.stability_eps)
    if (!(e > 0.0)) throw ConfigError("verify.stability_eps entries must be positive");
  initial_data();
}

namespace {

class Reader {
 public:
  Reader(const toml::table& root, std::string name) : name_(std::move(name)) {
    if (auto* t = root[name_].as_table()) table_ = t;
    else if (root.contains(name_)) throw ConfigError("[" + name_ + "] must be a table");
  }
  ~Reader() = default;

  void finish() const {
    if (!table_) return;
    for (const auto& [key, value] : *table_) {
      (void)value;
      if (!seen_.count(std::string(key.str())))
        throw ConfigError("unknown key " + name_ + "." + std::string(key.str()));
    }
  }

  void number(const char* key, double& out) {
    if (auto* n = node(key)) {
      if (auto v = n->value<double>()) out = *v;
      else throw ConfigError(name_ + "." + key + " must be a number");
    }
  }

  void integer(const char* key, int& out) {
    if (auto* n = node(key)) {
      if (auto v = n->value<int64_t>()) out = static_cast<int>(*v);
      else throw ConfigError(name_ + "." + key + " must be an integer");
    }
  }

  void optional_integer(const char* key, std::optional<int>& out) {
    int v = 0;
    if (node(key)) {
      integer(key, v);
      out = v;
    }
  }

  void text(const char* key, std::string& out) {
    if (auto* n = node(key)) {
      if (auto v = n->value<std::string>()) out = *v;
      else throw ConfigError(name_ + "." + key + " must be a string");
    }
  }

  void pair(const char* key, std::array<double, 2>& out) {
    std::vector<double> v;
    if (list(key, v)) {
      if (v.size() != 2) throw ConfigError(name_ + "." + key + " must have two entries");
      out = {v[0], v[1]};
    }
  }

  bool list(const char* key, std::vector<double>& out) {
    auto* n = node(key);
    if (!n) return false;
    auto* arr = n->as_array();
    if (!arr) throw ConfigError(name_ + "." + key + " must be an array");
    out.clear();
    for (const auto& e : *arr) {
      auto v = e.value<double>();
      if (!v) throw ConfigError(name_ + "." + key + " must contain numbers");
      out.push_back(*v);
    }
    return true;
  }

  void quadrature(QuadraturePolicy& q) {
    integer("n_space", q.n_space);
    integer("n_time", q.n_time);
    integer("n_radial", q.n_radial);
    integer("n_steps", q.n_steps);
    number("sing_exponent", q.sing_exponent);
    number("domain_halfwidth", q.domain_halfwidth);
  }

 private:
  const toml::node* node(const char* key) {
    seen_.insert(key);
    return table_ ? table_->get(key) : nullptr;
  }

  std::string name_;
  const toml::table* table_ = nullptr;
  std::set<std::string> seen_;
};

}  // namespace

Scenario parse_scenario(std::string_view text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "scenario parse error: " << e.description() << " at line " << e.source().begin.line;
    throw ConfigError(msg.str());
  }
  static const std::set<std::string> sections = {"name",   "seed", "checks", "output_dir", "inject_fault", "params", "data",
                                                 "grid",   "picard", "fd",   "kernel",     "verify",       "run"};
  for (const auto& [key, value] : root) {
    (void)value;
    if (!sections.count(std::string(key.str()))) throw ConfigError("unknown section " + std::string(key.str()));
  }

  Scenario s;
  if (root.contains("name")) {
    auto name = root["name"].value<std::string>();
    if (!name) throw ConfigError("name must be a string");
    s.name = *name;
  }
  if (root.contains("seed")) {
    auto seed = root["seed"].value<int64_t>();
    if (!seed || *seed < 0) throw ConfigError("seed must be a nonnegative integer");
    s.seed = static_cast<std::uint64_t>(*seed);
  }
  if (root.contains("output_dir")) {
    auto dir = root["output_dir"].value<std::string>();
    if (!dir) throw ConfigError("output_dir must be a string");
    s.output_dir = *dir;
  }
  if (root.contains("inject_fault")) {
    auto flag = root["inject_fault"].value<bool>();
    if (!flag) throw ConfigError("inject_fault must be a boolean");
    s.inject_fault = *flag;
  }
  if (root.contains("checks")) {
    auto* arr = root["checks"].as_array();
    if (!arr) throw ConfigError("checks must be an array of names");
    s.checks.clear();
    for (const auto& e : *arr) {
      auto v = e.value<std::string>();
      if (!v) throw ConfigError("checks must be an array of names");
      s.checks.push_back(*v);
    }
  }
  s.picard.seed = s.seed;

  Reader params(root, "params");
  params.pair("lambda", s.params.lambda);
  params.pair("a", s.params.a);
  params.pair("b", s.params.b);
  params.pair("c", s.params.c);
  params.pair("d", s.params.d);
  params.pair("A", s.params.A);
  params.number("q", s.params.q);
  params.number("E", s.params.E);
  params.finish();

  Reader data(root, "data");
  data.text("kind", s.data.kind);
  data.pair("u_amp", s.data.u_amp);
  data.pair("u_center", s.data.u_center);
  data.pair("u_width", s.data.u_width);
  data.pair("u_value", s.data.u_value);
  data.pair("y_level", s.data.y_level);
  data.pair("y_bump", s.data.y_bump);
  data.finish();

  Reader grid(root, "grid");
  grid.number("half_width", s.grid.half_width);
  grid.integer("nx", s.grid.nx);
  grid.number("T", s.grid.T);
  grid.integer("nt", s.grid.nt);
  grid.number("p", s.grid.p);
  grid.finish();

  Reader picard(root, "picard");
  picard.pair("ball_radius", s.picard.ball_radius);
  picard.number("tol", s.picard.tol_fixed_point);
  picard.integer("max_iters", s.picard.max_iters);
  picard.number("shrink", s.picard.window_shrink_factor);
  picard.optional_integer("levi_depth", s.picard.levi_depth);
  picard.quadrature(s.picard.quad);
  picard.finish();

  Reader fd(root, "fd");
  fd.integer("refine_x", s.fd.refine_x);
  fd.integer("refine_t", s.fd.refine_t);
  fd.number("theta", s.fd.theta);
  fd.finish();

  Reader kernel(root, "kernel");
  kernel.text("coefficients", s.kernel.coefficients);
  kernel.number("a", s.kernel.a);
  kernel.number("b", s.kernel.b);
  kernel.number("c", s.kernel.c);
  kernel.number("horizon", s.kernel.horizon);
  kernel.optional_integer("levi_depth", s.kernel.levi_depth);
  kernel.quadrature(s.kernel.quad);
  kernel.finish();

  Reader verify(root, "verify");
  verify.number("tol", s.verify.tol);
  verify.number("delta", s.verify.delta);
  verify.list("lp", s.verify.lp);
  std::vector<double> eps;
  if (verify.list("stability_eps", eps)) {
    if (eps.size() != 3) throw ConfigError("verify.stability_eps must have three entries");
    s.verify.stability_eps = {eps[0], eps[1], eps[2]};
  }
  verify.finish();

  Reader run(root, "run");
  run.number("horizon", s.horizon);
  run.finish();

  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace pfront
