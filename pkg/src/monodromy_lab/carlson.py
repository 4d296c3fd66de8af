"""Carlson symmetric elliptic integrals by the duplication algorithm.

Reference: B. C. Carlson, "Numerical computation of real or complex
elliptic integrals", Numer. Algorithms 10 (1995). Real arguments use real
arithmetic; any complex argument switches to principal-branch complex
arithmetic.
"""

from __future__ import annotations

import cmath
import math

from .errors import DomainError

__all__ = ["carlson_rf", "carlson_rc", "carlson_rj", "carlson_rd"]

# Truncation parameter r of the duplication series.
_TOL = 1e-16
_MAX_ITER = 100


def _prep(*args):
    if any(isinstance(a, complex) and a.imag != 0.0 for a in args):
        return [complex(a) for a in args], cmath.sqrt, False
    return [float(a.real if isinstance(a, complex) else a) for a in args], math.sqrt, True


def _out(v, real):
    return float(v.real) if real and isinstance(v, complex) else v


def carlson_rf(x, y, z):
    """R_F(x, y, z) = 1/2 int_0^inf dt / sqrt((t+x)(t+y)(t+z)).

    Real arguments must be non-negative with at most one zero.
    """
    (x, y, z), sqrt, real = _prep(x, y, z)
    if real and min(x, y, z) < 0:
        raise DomainError("R_F requires non-negative real arguments")
    if (x == 0) + (y == 0) + (z == 0) > 1:
        raise DomainError("R_F requires at most one zero argument")

    x0, y0, z0 = x, y, z
    a0 = (x + y + z) / 3.0
    q = (3.0 * _TOL) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    a, p4 = a0, 1.0
    for _ in range(_MAX_ITER):
        if p4 * q < abs(a):
            break
        sx, sy, sz = sqrt(x), sqrt(y), sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        x, y, z, a = (x + lam) / 4.0, (y + lam) / 4.0, (z + lam) / 4.0, (a + lam) / 4.0
        p4 /= 4.0
    else:  # pragma: no cover
        raise DomainError("R_F duplication did not converge")

    X = p4 * (a0 - x0) / a
    Y = p4 * (a0 - y0) / a
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    s = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0
    return _out(s / sqrt(a), real)


def carlson_rc(x, y, *, principal_value: bool = False):
    """R_C(x, y) = R_F(x, y, y).

    For real y < 0 the integral is a Cauchy principal value and is only
    returned when ``principal_value=True``.
    """
    (x, y), sqrt, real = _prep(x, y)
    if real:
        if x < 0:
            raise DomainError("R_C requires x >= 0")
        if y == 0:
            raise DomainError("R_C requires y != 0")
        if y < 0:
            if not principal_value:
                raise DomainError("R_C with y < 0 is a principal value; pass principal_value=True")
            return math.sqrt(x / (x - y)) * carlson_rc(x - y, -y)
    elif y == 0:
        raise DomainError("R_C requires y != 0")

    x0, y0 = x, y
    a0 = (x + 2.0 * y) / 3.0
    q = (3.0 * _TOL) ** (-1.0 / 8.0) * abs(a0 - x)
    a, p4 = a0, 1.0
    for _ in range(_MAX_ITER):
        if p4 * q < abs(a):
            break
        lam = 2.0 * sqrt(x) * sqrt(y) + y
        x, y, a = (x + lam) / 4.0, (y + lam) / 4.0, (a + lam) / 4.0
        p4 /= 4.0
    else:  # pragma: no cover
        raise DomainError("R_C duplication did not converge")

    s = p4 * (y0 - a0) / a
    poly = 1.0 + s * s * (
        3.0 / 10.0 + s * (1.0 / 7.0 + s * (3.0 / 8.0 + s * (9.0 / 22.0 + s * (159.0 / 208.0 + s * 9.0 / 8.0))))
    )
    return _out(poly / sqrt(a), real)


def _rc_one_plus(e, sqrt, real):
    """R_C(1, 1 + e), closed form for real e to avoid a nested duplication."""
    if real:
        if e == 0.0:
            return 1.0
        if e > 0.0:
            r = math.sqrt(e)
            return math.atan(r) / r
        if e > -1.0:
            r = math.sqrt(-e)
            return math.atanh(r) / r
        return carlson_rc(1.0, 1.0 + e, principal_value=True)
    return carlson_rc(1.0, 1.0 + e)


def carlson_rj(x, y, z, p, *, principal_value: bool = False):
    """R_J(x, y, z, p) = 3/2 int_0^inf dt / ((t+p) sqrt((t+x)(t+y)(t+z))).

    Real x, y, z must be non-negative with at most one zero and p must be
    non-zero. Real p < 0 gives a Cauchy principal value, computed only when
    ``principal_value=True``.
    """
    (x, y, z, p), sqrt, real = _prep(x, y, z, p)
    if real:
        if min(x, y, z) < 0:
            raise DomainError("R_J requires non-negative x, y, z")
        if (x == 0) + (y == 0) + (z == 0) > 1:
            raise DomainError("R_J requires at most one of x, y, z to be zero")
        if p == 0:
            raise DomainError("R_J requires p != 0")
        if p < 0:
            if not principal_value:
                raise DomainError("R_J with p < 0 is a principal value; pass principal_value=True")
            return _rj_principal_value(x, y, z, p)
    elif p == 0:
        raise DomainError("R_J requires p != 0")

    x0, y0, z0, p0 = x, y, z, p
    a0 = (x + y + z + 2.0 * p) / 5.0
    delta = (p - x) * (p - y) * (p - z)
    q = (_TOL / 4.0) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z), abs(a0 - p))
    a, p4 = a0, 1.0
    tail = 0.0
    for m in range(_MAX_ITER):
        if p4 * q < abs(a):
            break
        sx, sy, sz, sp = sqrt(x), sqrt(y), sqrt(z), sqrt(p)
        lam = sx * sy + sx * sz + sy * sz
        d = (sp + sx) * (sp + sy) * (sp + sz)
        e = delta * 4.0 ** (-3 * m) / (d * d)
        tail += p4 * _rc_one_plus(e, sqrt, real) / d
        x, y, z, p = (x + lam) / 4.0, (y + lam) / 4.0, (z + lam) / 4.0, (p + lam) / 4.0
        a = (a + lam) / 4.0
        p4 /= 4.0
    else:  # pragma: no cover
        raise DomainError("R_J duplication did not converge")

    X = p4 * (a0 - x0) / a
    Y = p4 * (a0 - y0) / a
    Z = p4 * (a0 - z0) / a
    P = -(X + Y + Z) / 2.0
    e2 = X * Y + X * Z + Y * Z - 3.0 * P * P
    e3 = X * Y * Z + 2.0 * e2 * P + 4.0 * P**3
    e4 = (2.0 * X * Y * Z + e2 * P + 3.0 * P**3) * P
    e5 = X * Y * Z * P * P
    s = (
        1.0
        - 3.0 * e2 / 14.0
        + e3 / 6.0
        + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0
    )
    return _out(p4 * s / (a * sqrt(a)) + 6.0 * tail, real)


def _rj_principal_value(x, y, z, p):
    # Reduction to a positive fourth argument q, after ordering x <= y <= z.
    x, y, z = sorted((x, y, z))
    q = y + (z - y) * (y - x) / (y - p)
    rj = carlson_rj(x, y, z, q)
    rf = carlson_rf(x, y, z)
    rc = carlson_rc(x * z / y, p * q / y, principal_value=True)
    return ((q - y) * rj + 3.0 * (rc - rf)) / (y - p)


def carlson_rd(x, y, z):
    """R_D(x, y, z) = R_J(x, y, z, z)."""
    return carlson_rj(x, y, z, z)
