"""Independent reference values for the kernel and model unit tests.

Everything here is brute force (dense sampling or adaptive quadrature) and
shares no code with the C++ implementation. Run with `python3 kernel_oracles.py`;
the printed numbers are frozen into tests/test_kernel.cpp and tests/test_model.cpp.
"""
import math

import numpy as np
from scipy import integrate


def heat(x, s, a=1.0):
    return math.exp(-x * x / (4 * a * s)) / math.sqrt(4 * math.pi * a * s)


def heat_x(x, s, a=1.0):
    return -x / (2 * a * s) * heat(x, s, a)


def lz1_const(x, t, xi, tau, a, b):
    # constant a: (a(xi)-a(x)) Z_xx vanishes, c = 0
    return b * heat_x(x - xi, t - tau, a)


def lz2_bruteforce(x, t, xi, tau, a, b):
    """(LZ)_2 = int_tau^t int_R LZ(x,t,y,s) LZ(y,s,xi,tau) dy ds by adaptive quadrature.

    The s-integral has inverse square-root endpoint singularities; scipy's QAGS
    handles them, and we further split at the midpoint.
    """
    def inner(s):
        f = lambda y: lz1_const(x, t, y, s, a, b) * lz1_const(y, s, xi, tau, a, b)
        w1 = math.sqrt(2 * a * (t - s))
        w2 = math.sqrt(2 * a * (s - tau))
        lo = min(x - 12 * w1, xi - 12 * w2)
        hi = max(x + 12 * w1, xi + 12 * w2)
        v, _ = integrate.quad(f, lo, hi, limit=400, epsabs=1e-14, epsrel=1e-12,
                              points=[x, xi])
        return v
    mid = 0.5 * (t + tau)
    v1, _ = integrate.quad(inner, tau, mid, limit=400, epsabs=1e-13, epsrel=1e-11)
    v2, _ = integrate.quad(inner, mid, t, limit=400, epsabs=1e-13, epsrel=1e-11)
    return v1 + v2


def arrhenius_deriv_max(E):
    s = np.linspace(1e-4, 20 * E, 2_000_001)
    d = (E / s**2) * np.exp(-E / s)
    k = int(np.argmax(d))
    return s[k], d[k]


if __name__ == "__main__":
    print("# arrhenius derivative maximum (E, argmax, max)")
    for E in (0.5, 1.0, 3.0):
        s, d = arrhenius_deriv_max(E)
        print(f"{E!r}: argmax={s:.10f} max={d:.15e}")

    print("# (LZ)_2 for a=1, b=0.8, c=0 (x, t, xi, tau) -> value")
    for (x, t, xi, tau) in [(0.0, 0.3, 0.0, 0.0), (0.4, 0.5, 0.1, 0.1),
                            (-0.3, 0.25, 0.2, 0.05), (1.0, 0.6, 0.0, 0.0)]:
        v = lz2_bruteforce(x, t, xi, tau, 1.0, 0.8)
        print(f"{{{x}, {t}, {xi}, {tau}, {v:.15e}}},")
