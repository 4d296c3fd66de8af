"""Brute-force quadrature references, independent of the Carlson reductions.

Everything here integrates the defining integrals directly with adaptive
Gauss-Kronrod quadrature. Endpoint square-root singularities are removed
by x = a + (b - a) sin^2(phi), which cancels sqrt((x - a)(b - x)) against
the Jacobian and leaves a smooth integrand.
"""

from __future__ import annotations

import math
import warnings

import mpmath
import numpy as np
from scipy.integrate import IntegrationWarning, quad

__all__ = [
    "quad_rf",
    "quad_rj",
    "quad_complete",
    "pendulum_roots_numpy",
    "pendulum_oracle",
]

_OPTS = dict(epsabs=0.0, epsrel=1e-12, limit=2000)


def quad_rf(x: float, y: float, z: float) -> float:
    """R_F by quadrature after t = s^2."""
    f = lambda s: s / math.sqrt((s * s + x) * (s * s + y) * (s * s + z))
    return _half_line(f)


def quad_rj(x: float, y: float, z: float, p: float) -> float:
    """R_J (p > 0) by quadrature after t = s^2."""
    f = lambda s: 3.0 * s / ((s * s + p) * math.sqrt((s * s + x) * (s * s + y) * (s * s + z)))
    return _half_line(f)


def _half_line(f) -> float:
    # split at s = 1 so both pieces are well scaled
    return _quad(f, 0.0, 1.0) + _quad(lambda u: f(1.0 / u) / (u * u) if u > 0 else 0.0, 0.0, 1.0)


def quad_complete(a: float, b: float, r: float, lead: float, weight=None) -> float:
    """int_a^b w(x) dx / sqrt(lead (x - a)(x - b)(x - r)) for consecutive roots a < b."""
    w = weight or (lambda x: 1.0)
    span = b - a

    def integrand(phi):
        x = a + span * math.sin(phi) ** 2
        return 2.0 * w(x) / math.sqrt(abs(lead) * abs(x - r))

    return _quad(integrand, 0.0, 0.5 * math.pi)


def pendulum_roots_numpy(j: float, h: float) -> tuple:
    """Real roots of 2(h - x)(1 - x^2) - j^2 via the companion matrix, Newton-polished."""
    coeffs = [2.0, -2.0 * h, -2.0, 2.0 * h - j * j]
    out = []
    for r in sorted(np.roots(coeffs).real):
        for _ in range(4):
            pr = np.polyval(coeffs, r)
            dp = np.polyval([6.0, -4.0 * h, -2.0], r)
            if dp == 0:
                break
            r = r - pr / dp
        out.append(float(r))
    return tuple(out)


def _pendulum_offsets(j: float, h: float) -> dict:
    """Roots and their distances to +-1 in 40-digit arithmetic, rounded to floats."""
    with mpmath.workdps(40):
        jm, hm = mpmath.mpf(j), mpmath.mpf(h)
        roots = mpmath.polyroots([2, -2 * hm, -2, 2 * hm - jm * jm], maxsteps=200, extraprec=80)
        a, b, r = sorted(mpmath.re(x) for x in roots)
        return {
            "a": float(a),
            "b": float(b),
            "r": float(r),
            "span": float(b - a),
            "one_minus_b": float(1 - b),
            "one_plus_a": float(1 + a),
            "r_minus_b": float(r - b),
        }


def pendulum_oracle(j: float, h: float) -> tuple:
    """(Theta, T) at (j, h) by sin^2-substituted adaptive quadrature.

    With x = a + (b - a) sin^2(phi) the integrands become
    2 / sqrt(2 (r - x)) and 2 / ((1 - x)(1 + x) sqrt(2 (r - x))), where
    1 - x, 1 + x and r - x are assembled from extended-precision offsets so
    that the near-pole peak is resolved without cancellation.
    """
    o = _pendulum_offsets(j, h)
    span = o["span"]

    def parts(phi):
        s2, c2 = math.sin(phi) ** 2, math.cos(phi) ** 2
        return o["one_minus_b"] + span * c2, o["one_plus_a"] + span * s2, o["r_minus_b"] + span * c2

    def f_period(phi):
        return 2.0 / math.sqrt(2.0 * parts(phi)[2])

    def f_theta(phi):
        one_minus, one_plus, r_minus = parts(phi)
        return 2.0 / (one_minus * one_plus * math.sqrt(2.0 * r_minus))

    period = 2.0 * _quad(f_period, 0.0, 0.5 * math.pi)
    theta = 2.0 * j * _quad(f_theta, 0.0, 0.5 * math.pi)
    return theta, period


def _quad(f, a: float, b: float) -> float:
    with warnings.catch_warnings():
        # the requested 1e-12 can sit at the roundoff floor for smooth integrands
        warnings.simplefilter("ignore", IntegrationWarning)
        val, _ = quad(f, a, b, **_OPTS)
    return val
