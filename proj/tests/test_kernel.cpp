#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "porous_front/errors.hpp"
#include "porous_front/kernel.hpp"
#include "porous_front/quadrature.hpp"

using namespace pfront;

namespace {

ParabolicCoefficients advection(double a, double b) {
  ParabolicCoefficients pc = ParabolicCoefficients::heat(a);
  pc.b = CoefficientField::constant(b);
  return pc;
}

ParabolicCoefficients smooth_variable() {
  ParabolicCoefficients pc;
  pc.a = CoefficientField::analytic([](double x, double t) { return 1.0 + 0.3 * std::sin(x) * std::exp(-t); });
  pc.b = CoefficientField::analytic([](double x, double) { return 0.2 * std::cos(x); });
  pc.c = CoefficientField::constant(0.0);
  pc.lambda0 = 0.7;
  pc.lambda1 = 1.3;
  return pc;
}

double moving_gaussian(double a, double b, double x, double s) {
  const double d = x - b * s;
  return std::exp(-d * d / (4 * a * s)) / std::sqrt(4 * std::numbers::pi * a * s);
}

KernelOptions opts(double horizon, QuadraturePolicy q = {}) {
  KernelOptions o;
  o.horizon = horizon;
  o.quad = q;
  return o;
}

}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  const QuadratureRule r = gauss_legendre(6, 0.0, 2.0);
  for (int deg = 0; deg <= 11; ++deg) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) sum += r.weights(i) * std::pow(r.nodes(i), deg);
    CHECK(sum == doctest::Approx(std::pow(2.0, deg + 1) / (deg + 1)).epsilon(1e-13));
  }
}

TEST_CASE("Chebyshev barycentric weights reproduce polynomials") {
  const Eigen::VectorXd pts = chebyshev_points(9, 0.0, 1.5);
  for (double at : {0.0, 0.37, 1.5, pts(3)}) {
    const Eigen::VectorXd w = chebyshev_interp_weights(9, 0.0, 1.5, at);
    for (int deg = 0; deg <= 8; ++deg)
      CHECK(w.dot(pts.array().pow(deg).matrix()) == doctest::Approx(std::pow(at, deg)).epsilon(1e-11));
  }
}

TEST_CASE("Z: value, unit mass, symmetry, ordering") {
  const ParabolicCoefficients heat = ParabolicCoefficients::heat(1.0);
  CHECK(eval_Z(heat, 0.3, 1.5, 0.3, 0.5) == doctest::Approx(1.0 / std::sqrt(4 * std::numbers::pi)).epsilon(1e-15));
  for (double a : {0.5, 2.0}) {
    const ParabolicCoefficients pc = ParabolicCoefficients::heat(a);
    const QuadratureRule r = trapezoid(4001, -20, 20);
    double mass = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) mass += r.weights(i) * eval_Z(pc, r.nodes(i), 0.7, 0.1, 0.2);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eval_Z(pc, 1.3, 0.7, 1.0, 0.2) == eval_Z(pc, 0.7, 0.7, 1.0, 0.2));
  }
  CHECK_THROWS_AS(eval_Z(heat, 0, 1, 0, 1), DomainError);
  CHECK_THROWS_AS(eval_LZ(heat, 0, 0.5, 0, 1), DomainError);
}

TEST_CASE("first iterate closed forms") {
  const ParabolicCoefficients heat = ParabolicCoefficients::heat(1.7);
  CHECK(eval_LZ(heat, 0.4, 0.9, -0.2, 0.1) == 0.0);
  const ParabolicCoefficients adv = advection(0.8, 1.3);
  for (double x : {-1.0, 0.0, 0.25, 2.0}) {
    const double s = 0.4;
    const double expected = -1.3 * x / (2 * 0.8 * s) * eval_Z(adv, x, s, 0, 0);
    CHECK(eval_LZ(adv, x, s, 0, 0) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("second iterate matches the adaptive-quadrature oracle") {
  // a = 1, b = 0.8, c = 0; values from tests/oracles/kernel_oracles.py.
  KernelHandle h(advection(1.0, 0.8), opts(0.6));
  const double oracle[4][5] = {{0.0, 0.3, 0.0, 0.0, -1.648103261965609e-01},
                               {0.4, 0.5, 0.1, 0.1, -1.197441616499605e-01},
                               {-0.3, 0.25, 0.2, 0.05, -5.537889561040518e-02},
                               {1.0, 0.6, 0.0, 0.0, -1.280448561614272e-02}};
  for (const auto& r : oracle) CHECK(levi_iterate_m(h, 2, r[0], r[1], r[2], r[3]) == doctest::Approx(r[4]).epsilon(1e-7));
  CHECK_THROWS_AS(levi_iterate_m(h, h.levi_depth() + 1, 0.0, 0.3, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(levi_iterate_m(h, 0, 0.0, 0.3, 0.0, 0.0), DomainError);
}

TEST_CASE("iterates vanish for the heat operator") {
  KernelOptions o = opts(0.5);
  o.levi_depth = 6;
  KernelHandle h(ParabolicCoefficients::heat(1.0), o);
  for (int m = 1; m <= 6; ++m) CHECK(levi_iterate_m(h, m, 0.3, 0.4, 0.0, 0.0) == 0.0);
  CHECK(eval_phi(h, 0.3, 0.4, 0.0, 0.0).value == 0.0);
}

TEST_CASE("iterates respect the factorial majorant") {
  KernelHandle h(advection(1.0, 1.5), opts(0.5));
  const TailConstants tc = h.tail_constants();
  const double alpha = 1.0;
  for (int m = 1; m <= 6; ++m) {
    for (double s : {0.05, 0.2, 0.5}) {
      for (double z : {-2.0, -0.5, 0.7, 1.5}) {
        const double x = z * std::sqrt(s);
        const double bound = std::exp(levi_majorant_log_term(tc.K, tc.C, alpha, s, m) - tc.C * x * x / s);
        CHECK(std::abs(levi_iterate_m(h, m, x, s, 0.0, 0.0)) <= bound);
      }
    }
  }
}

TEST_CASE("tail bound decreases to zero with vanishing ratio") {
  KernelHandle h(advection(1.0, 1.5), opts(0.5));
  const TailConstants tc = h.tail_constants();
  double prev = levi_tail_bound(h, 1, 0.5);
  for (int m = 2; m <= 300; ++m) {
    const double b = levi_tail_bound(h, m, 0.5);
    CHECK(b <= prev);
    prev = b;
  }
  CHECK(prev < 1e-30);
  const double r1 = std::exp(levi_majorant_log_term(tc.K, tc.C, 1.0, 0.5, 101) - levi_majorant_log_term(tc.K, tc.C, 1.0, 0.5, 100));
  const double r2 = std::exp(levi_majorant_log_term(tc.K, tc.C, 1.0, 0.5, 1001) - levi_majorant_log_term(tc.K, tc.C, 1.0, 0.5, 1000));
  CHECK(r2 < r1);
  CHECK(r2 < 0.25);
  CHECK(h.depth_certified());
  CHECK(levi_tail_bound(h, h.levi_depth(), 0.5) < 1e-8 / std::sqrt(0.5));
}

TEST_CASE("density obeys the fitted envelope and its partial sums settle") {
  const ParabolicCoefficients pc = smooth_variable();
  KernelHandle h(pc, opts(0.5, QuadraturePolicy::coarse()));
  const TailConstants tc = h.tail_constants();
  KernelOptions shallow = opts(0.5, QuadraturePolicy::coarse());
  shallow.levi_depth = 3;
  KernelOptions deeper = shallow;
  deeper.levi_depth = 6;
  KernelHandle h3(pc, shallow), h6(pc, deeper);
  for (double s : {0.05, 0.25, 0.5}) {
    for (double z : {-1.5, 0.0, 1.0}) {
      const double x = 0.4 + z * std::sqrt(s);
      const SeriesValue v = eval_phi(h, x, s, 0.4, 0.0);
      CHECK(std::abs(v.value) <= tc.K * std::pow(s, -1.0) * std::exp(-tc.C * z * z));
      const double gap = std::abs(eval_phi(h3, x, s, 0.4, 0.0).value - eval_phi(h6, x, s, 0.4, 0.0).value);
      const double gap_full = std::abs(eval_phi(h6, x, s, 0.4, 0.0).value - v.value);
      CHECK(gap_full <= gap + 1e-12);
    }
  }
}

TEST_CASE("parametrix is exact for constant diffusion") {
  for (double a : {0.5, 1.0, 2.0}) {
    KernelHandle h(ParabolicCoefficients::heat(a), opts(1.0));
    for (double s : {0.01, 0.3, 1.0})
      for (double x : {-2.0, 0.0, 0.9}) CHECK(eval_gamma(h, x, 0.2 + s, 0.1, 0.2) == eval_Z(h.coeffs(), x, 0.2 + s, 0.1, 0.2));
  }
}

TEST_CASE("constant drift reproduces the moving Gaussian and its derivative") {
  KernelHandle h(advection(1.0, 1.5), opts(0.5));
  double err = 0.0, derr = 0.0;
  for (double s : {0.02, 0.1, 0.3, 0.5}) {
    for (double x : {-1.0, 0.0, 0.4, 1.2, 2.0}) {
      err = std::max(err, std::abs(eval_gamma(h, x, s, 0.0, 0.0) - moving_gaussian(1, 1.5, x, s)));
      const double d = x - 1.5 * s;
      const double exact_dx = -d / (2 * s) * moving_gaussian(1, 1.5, x, s);
      derr = std::max(derr, std::abs(eval_gamma_dx(h, x, s, 0.0, 0.0) - exact_dx));
    }
    // Antisymmetry of the derivative about the moving centre.
    const double c = 1.5 * s, off = 0.3 * std::sqrt(s);
    CHECK(eval_gamma_dx(h, c + off, s, 0, 0) == doctest::Approx(-eval_gamma_dx(h, c - off, s, 0, 0)).epsilon(1e-5));
  }
  CHECK(err <= 1e-6);
  CHECK(derr <= 1e-5);
  KernelHandle heat(ParabolicCoefficients::heat(1.0), opts(0.5));
  CHECK(eval_gamma_dx(heat, 0.3, 0.4, 0.3, 0.0) == 0.0);
}

TEST_CASE("variable coefficients: unit mass, nonnegativity") {
  KernelHandle h(smooth_variable(), opts(0.5, QuadraturePolicy::coarse()));
  for (double s : {0.05, 0.3}) {
    const double x = 0.7;
    const double width = 8.0 * std::sqrt(2.0 * 1.3 * s);
    const QuadratureRule r = trapezoid(81, x - width, x + width);
    double mass = 0.0, low = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      const double g = eval_gamma(h, x, s, r.nodes(i), 0.0);
      mass += r.weights(i) * g;
      low = std::min(low, g);
    }
    CHECK(std::abs(mass - 1.0) <= 1e-3);
    CHECK(low >= -1e-6);
  }
}

TEST_CASE("Chapman-Kolmogorov spot check") {
  KernelHandle h(smooth_variable(), opts(0.5, QuadraturePolicy::coarse()));
  const double x = 0.3, t = 0.3, mid = 0.15, xi = -0.2, tau = 0.0;
  const double width = 8.0 * std::sqrt(2.0 * 1.3 * 0.15);
  const QuadratureRule r = trapezoid(81, 0.05 - width, 0.05 + width);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    sum += r.weights(i) * eval_gamma(h, x, t, r.nodes(i), mid) * eval_gamma(h, r.nodes(i), mid, xi, tau);
  CHECK(sum == doctest::Approx(eval_gamma(h, x, t, xi, tau)).epsilon(2e-3));
}

TEST_CASE("PDE residual decays under refinement") {
  const ParabolicCoefficients pc = smooth_variable();
  KernelHandle h(pc, opts(0.5));
  const double x = 0.5, t = 0.3;
  auto residual = [&](double hx) {
    const double ht = hx * hx;
    auto G = [&](double xx, double tt) { return eval_gamma(h, xx, tt, 0.0, 0.0); };
    const double gt = (G(x, t + ht) - G(x, t - ht)) / (2 * ht);
    const double gx = (G(x + hx, t) - G(x - hx, t)) / (2 * hx);
    const double gxx = (G(x + hx, t) - 2 * G(x, t) + G(x - hx, t)) / (hx * hx);
    return std::abs(gt - pc.a(x, t) * gxx + pc.b(x, t) * gx);
  };
  const double r1 = residual(0.1), r2 = residual(0.05);
  CHECK(r2 < 0.5 * r1);
  CHECK(r2 < 1e-2);
}

TEST_CASE("apply_gamma: heat Gaussian, unit mass, delta family") {
  KernelHandle heat(ParabolicCoefficients::heat(1.0), opts(1.0));
  const SpatialGrid grid{8.0, 161};
  const Eigen::VectorXd x = grid.nodes();
  const double var0 = 0.5, s = 0.4;
  const Eigen::VectorXd g = (-x.array().square() / (2 * var0)).exp() / std::sqrt(2 * std::numbers::pi * var0);
  const Eigen::VectorXd out = apply_gamma(heat, grid, g, 0.5 + s, 0.5);
  const double var1 = var0 + 2 * s;
  const Eigen::VectorXd expected =
      (-x.array().square() / (2 * var1)).exp() / std::sqrt(2 * std::numbers::pi * var1);
  CHECK((out - expected).cwiseAbs().maxCoeff() <= 1e-7);

  KernelHandle h(smooth_variable(), opts(0.5));
  const Eigen::VectorXd one = apply_gamma(h, grid, Eigen::VectorXd::Ones(grid.nx), 0.3, 0.0);
  CHECK((one.segment(30, 101).array() - 1.0).abs().maxCoeff() <= 1e-3);

  const SpatialGrid wide{4 * std::numbers::pi, 161};
  const Eigen::VectorXd psi = wide.nodes().array().cos();
  double prev = 1e300;
  for (double dt : {0.1, 0.05, 0.025}) {
    const double e = (apply_gamma(h, wide, psi, dt, 0.0) - psi).cwiseAbs().maxCoeff();
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev <= 0.05);
  CHECK_THROWS_AS(apply_gamma(h, grid, one, 0.0, 0.0), DomainError);
}

TEST_CASE("coefficient gap is zero for equal kernels and linear in the perturbation") {
  const ParabolicCoefficients base = smooth_variable();
  auto perturbed = [&](double eps) {
    ParabolicCoefficients pc = base;
    const CoefficientField a0 = base.a;
    pc.a = CoefficientField::analytic([a0, eps](double x, double t) { return a0(x, t) + eps * std::cos(0.5 * x); });
    pc.lambda0 -= eps;
    pc.lambda1 += eps;
    return pc;
  };
  const KernelOptions o = opts(0.5, QuadraturePolicy::coarse());
  KernelHandle h0(base, o);
  const std::vector<KernelSample> samples = {{0.1, 0.2, 0.0, 0.0}, {0.6, 0.4, 0.2, 0.1}, {-0.5, 0.3, 0.0, 0.0}};
  CHECK(coefficient_gap(h0, h0, samples).sup == 0.0);
  ParabolicCoefficients widened = base;
  widened.lambda0 -= 0.02;
  widened.lambda1 += 0.02;
  KernelHandle hw(widened, o);
  KernelHandle h1(perturbed(0.02), o), h2(perturbed(0.01), o);
  const double g1 = coefficient_gap(hw, h1, samples).sup;
  const double g2 = coefficient_gap(hw, h2, samples).sup;
  CHECK(g1 / g2 >= 1.5);
  CHECK(g1 / g2 <= 2.5);
  KernelHandle other(base, opts(0.4, QuadraturePolicy::coarse()));
  CHECK_THROWS_AS(coefficient_gap(h0, other, samples), ConfigError);
}

TEST_CASE("handle configuration errors") {
  KernelOptions o;
  o.levi_depth = 0;
  CHECK_THROWS_AS(KernelHandle(ParabolicCoefficients::heat(1.0), o), ConfigError);
  KernelOptions q;
  q.quad.domain_halfwidth = 5.0;
  CHECK_THROWS_AS(KernelHandle(ParabolicCoefficients::heat(1.0), q), ConfigError);
  q.quad = {};
  q.quad.n_time = 3;
  CHECK_THROWS_AS(KernelHandle(ParabolicCoefficients::heat(1.0), q), ConfigError);
}
