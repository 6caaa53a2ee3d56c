#include "porous_front/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>

#include "kernel_terms.hpp"
#include "porous_front/errors.hpp"
#include "source_lattice.hpp"

namespace pfront {

void QuadraturePolicy::validate() const {
  if (n_space < 8 || n_time < 4 || n_radial < 4 || n_steps < 4)
    throw ConfigError("quadrature node counts must be at least 4 (8 spatial)");
  if (!(sing_exponent >= 1.0)) throw ConfigError("singularity exponent must be >= 1");
  if (!(domain_halfwidth >= 6.0)) throw ConfigError("domain_halfwidth must be >= 6");
}

QuadraturePolicy QuadraturePolicy::coarse() {
  QuadraturePolicy q;
  q.n_space = 57;
  q.n_time = 8;
  q.n_radial = 10;
  return q;
}

void SpatialGrid::validate() const {
  if (!(half_width > 0.0)) throw ConfigError("grid half width must be positive");
  if (nx < 5) throw ConfigError("grid needs at least 5 nodes");
}

struct KernelHandle::Shared {
  ParabolicCoefficients coeffs;
  KernelOptions options;
  TailConstants tail;
  int depth = 1;
  bool certified = false;
  std::mutex mutex;
  std::map<std::pair<double, double>, std::shared_ptr<const detail::SourceLattice>> cache;
};

KernelHandle::KernelHandle(ParabolicCoefficients coeffs, KernelOptions options)
    : shared_(std::make_shared<Shared>()) {
  options.quad.validate();
  if (!(options.horizon > 0.0)) throw ConfigError("kernel horizon must be positive");
  if (options.max_depth < 1) throw ConfigError("max_depth must be >= 1");
  if (options.levi_depth && *options.levi_depth < 1) throw ConfigError("levi_depth must be >= 1");
  if (!(coeffs.lambda0 > 0.0) || coeffs.lambda1 < coeffs.lambda0)
    throw ConfigError("ellipticity bounds need 0 < lambda0 <= lambda1");
  if (!(coeffs.holder_alpha > 0.0) || coeffs.holder_alpha > 1.0)
    throw ConfigError("Holder exponent must lie in (0, 1]");
  Shared& s = *shared_;
  s.coeffs = std::move(coeffs);
  s.options = options;
  s.tail = fit_tail_constants(s.coeffs, options.horizon);
  const double target = 1e-8 / std::sqrt(options.horizon);
  s.depth = options.max_depth;
  for (int m = 1; m <= options.max_depth; ++m) {
    if (levi_majorant_tail(s.tail.K, s.tail.C, s.coeffs.holder_alpha, options.horizon, m) < target) {
      s.depth = m;
      s.certified = true;
      break;
    }
  }
  if (options.levi_depth) {
    s.depth = *options.levi_depth;
    s.certified =
        levi_majorant_tail(s.tail.K, s.tail.C, s.coeffs.holder_alpha, options.horizon, s.depth) < target;
  }
}

const ParabolicCoefficients& KernelHandle::coeffs() const { return shared_->coeffs; }
const QuadraturePolicy& KernelHandle::quad() const { return shared_->options.quad; }
const TailConstants& KernelHandle::tail_constants() const { return shared_->tail; }
int KernelHandle::levi_depth() const { return shared_->depth; }
bool KernelHandle::depth_certified() const { return shared_->certified; }
double KernelHandle::horizon() const { return shared_->options.horizon; }

std::shared_ptr<const detail::SourceLattice> KernelHandle::lattice(double xi, double tau) const {
  Shared& s = *shared_;
  const auto key = std::make_pair(xi, tau);
  {
    std::lock_guard<std::mutex> lock(s.mutex);
    auto it = s.cache.find(key);
    if (it != s.cache.end()) return it->second;
  }
  // Built outside the lock; a concurrent duplicate is harmless.
  auto lat = std::make_shared<const detail::SourceLattice>(s.coeffs, xi, tau, s.options.horizon, s.options.quad,
                                                          s.depth);
  std::lock_guard<std::mutex> lock(s.mutex);
  if (s.cache.size() >= 512) s.cache.clear();
  s.cache.emplace(key, lat);
  return lat;
}

namespace {

void require_order(double t, double tau) {
  if (!(t > tau)) throw DomainError("kernel evaluated at t <= tau");
}

}  // namespace

double eval_Z(const ParabolicCoefficients& coeffs, double x, double t, double xi, double tau) {
  require_order(t, tau);
  return detail::kernel_value(detail::KernelKind::Z, coeffs, x, t, xi, tau);
}

double eval_Z_dx(const ParabolicCoefficients& coeffs, double x, double t, double xi, double tau) {
  require_order(t, tau);
  return detail::kernel_value(detail::KernelKind::Zx, coeffs, x, t, xi, tau);
}

double eval_LZ(const ParabolicCoefficients& coeffs, double x, double t, double xi, double tau) {
  require_order(t, tau);
  return detail::kernel_value(detail::KernelKind::LZ, coeffs, x, t, xi, tau);
}

double levi_iterate_m(const KernelHandle& h, int m, double x, double t, double xi, double tau) {
  if (m < 1) throw DomainError("Levi iterate index must be >= 1");
  if (m > h.levi_depth()) throw DomainError("Levi iterate index exceeds the handle depth");
  require_order(t, tau);
  if (m == 1) return eval_LZ(h.coeffs(), x, t, xi, tau);
  return h.lattice(xi, tau)->iterate(m, x, t);
}

double levi_tail_bound(const KernelHandle& h, int m, double dt) {
  const TailConstants& tc = h.tail_constants();
  return levi_majorant_tail(tc.K, tc.C, h.coeffs().holder_alpha, dt, m);
}

SeriesValue eval_phi(const KernelHandle& h, double x, double t, double xi, double tau) {
  require_order(t, tau);
  const auto lat = h.lattice(xi, tau);
  SeriesValue out;
  out.value = lat->phi(x, t);
  out.terms = std::min(h.levi_depth(), std::max(lat->levels(), 1));
  out.tail_bound = levi_tail_bound(h, h.levi_depth(), t - tau);
  return out;
}

double eval_gamma(const KernelHandle& h, double x, double t, double xi, double tau) {
  require_order(t, tau);
  return h.lattice(xi, tau)->gamma(x, t);
}

double eval_gamma_dx(const KernelHandle& h, double x, double t, double xi, double tau) {
  require_order(t, tau);
  return h.lattice(xi, tau)->gamma_dx(x, t);
}

GammaGap coefficient_gap(const KernelHandle& v, const KernelHandle& vbar, const std::vector<KernelSample>& samples,
                         int derivative) {
  if (derivative != 0 && derivative != 1) throw ConfigError("coefficient_gap supports derivative orders 0 and 1");
  if (v.horizon() != vbar.horizon()) throw ConfigError("coefficient_gap: handles have different horizons");
  const QuadraturePolicy& qa = v.quad();
  const QuadraturePolicy& qb = vbar.quad();
  if (qa.n_space != qb.n_space || qa.n_time != qb.n_time || qa.n_radial != qb.n_radial ||
      qa.domain_halfwidth != qb.domain_halfwidth || qa.sing_exponent != qb.sing_exponent)
    throw ConfigError("coefficient_gap: handles use different quadrature lattices");
  if (v.coeffs().holder_alpha != vbar.coeffs().holder_alpha)
    throw ConfigError("coefficient_gap: handles belong to different Holder classes");
  const double C = std::min(v.tail_constants().C, vbar.tail_constants().C);
  GammaGap gap;
  for (const KernelSample& smp : samples) {
    const auto [x, t, xi, tau] = smp;
    const double s = t - tau;
    const double d =
        derivative == 0 ? eval_gamma(v, x, t, xi, tau) - eval_gamma(vbar, x, t, xi, tau)
                        : eval_gamma_dx(v, x, t, xi, tau) - eval_gamma_dx(vbar, x, t, xi, tau);
    const double weighted = std::abs(d) * std::pow(s, 0.5 * (1 + derivative)) * std::exp(C * (x - xi) * (x - xi) / s);
    if (weighted >= gap.sup) gap = {weighted, smp};
  }
  return gap;
}

TailConstants fit_tail_constants(const ParabolicCoefficients& coeffs, double horizon) {
  const double alpha = coeffs.holder_alpha;
  const double cmax = 1.0 / (4.0 * coeffs.lambda1);
  struct Probe {
    double q;  // d^2 / s
    double e;  // |LZ| s^{(3-alpha)/2}
  };
  std::vector<Probe> probes;
  const double spread = std::sqrt(2.0 * coeffs.lambda1);
  for (double xi : {-1.0, 0.0, 1.0}) {
    for (double tau : {0.0, 0.25 * horizon}) {
      for (int is = 0; is < 12; ++is) {
        const double s = horizon * std::pow(1e-3, 1.0 - is / 11.0);
        for (int iz = 0; iz < 49; ++iz) {
          const double z = (-6.0 + 12.0 * iz / 48.0) * spread;
          const double d = z * std::sqrt(s);
          const double lz = detail::kernel_value(detail::KernelKind::LZ, coeffs, xi + d, tau + s, xi, tau);
          probes.push_back({z * z, std::abs(lz) * std::pow(s, 0.5 * (3.0 - alpha))});
        }
      }
    }
  }
  double emax = 0.0;
  for (const Probe& p : probes) emax = std::max(emax, p.e);
  TailConstants tc;
  if (emax == 0.0) {
    tc.C = cmax;
    return tc;
  }
  double sq = 0, sl = 0, sqq = 0, sql = 0;
  int n = 0;
  for (const Probe& p : probes) {
    if (p.e <= 1e-10 * emax) continue;
    const double l = std::log(p.e);
    sq += p.q;
    sl += l;
    sqq += p.q * p.q;
    sql += p.q * l;
    ++n;
  }
  double slope = 0.0;
  const double den = n * sqq - sq * sq;
  if (n > 1 && den > 0.0) slope = (n * sql - sq * sl) / den;
  tc.C = std::clamp(-slope, 1e-3 * cmax, cmax);
  double kmax = 0.0;
  for (const Probe& p : probes) kmax = std::max(kmax, p.e * std::exp(tc.C * p.q));
  tc.K = 2.0 * kmax;
  return tc;
}

void write_gamma_dump(const KernelHandle& h, const std::vector<KernelSample>& samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path);
  out << "x,t,xi,tau,gamma,gamma_dx\n";
  char buf[512];
  for (const KernelSample& smp : samples) {
    const auto [x, t, xi, tau] = smp;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", x, t, xi, tau,
                  eval_gamma(h, x, t, xi, tau), eval_gamma_dx(h, x, t, xi, tau));
    out << buf;
  }
}

}  // namespace pfront
