#pragma once

#include <cmath>
#include <numbers>

#include "porous_front/coefficients.hpp"

namespace pfront::detail {

enum class KernelKind { Z, Zx, LZ };

/// Frozen heat kernel Z(x,t,y,s) with diffusion a(y,s), and the first Levi
/// iterate built from it.
inline double kernel_value(KernelKind kind, const ParabolicCoefficients& c, double x, double t, double y,
                           double s) {
  const double dt = t - s;
  const double asrc = c.a(y, s);
  const double d = x - y;
  const double four_as = 4.0 * asrc * dt;
  const double z = std::exp(-d * d / four_as) / std::sqrt(std::numbers::pi * four_as);
  const double zx = -2.0 * d / four_as * z;
  switch (kind) {
    case KernelKind::Z:
      return z;
    case KernelKind::Zx:
      return zx;
    case KernelKind::LZ: {
      const double zxx = (d * d / (4.0 * asrc * asrc * dt * dt) - 1.0 / (2.0 * asrc * dt)) * z;
      const double da = asrc - c.a(x, t);
      const double bv = c.b(x, t);
      const double cv = c.c(x, t);
      double out = 0.0;
      if (da != 0.0) out += da * zxx;
      if (bv != 0.0) out += bv * zx;
      if (cv != 0.0) out += cv * z;
      return out;
    }
  }
  return 0.0;
}

}  // namespace pfront::detail
