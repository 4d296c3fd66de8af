"""Weierstrass cubics: invariants, roots, periods, modulus, elliptic integrals.

The real half-period is normalised as

    omega = int_{e1}^{inf} dx / sqrt(P(x)),   P(x) = 4x^3 - g2 x - g3,

which equals the integral over the segment [e3, e2]; a closed cycle around
that segment (crossing onto the second sheet) integrates to 2 omega. The
imaginary half-period omega' is oriented so that tau = omega'/omega lies
in the upper half-plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .carlson import carlson_rf, carlson_rj
from .errors import DegenerateCurveError, DomainError, PoleOnPathError, RootOrderError, UnsupportedCurveError
from .thetafn import ModularParameter, theta2, theta3, theta4

DISCRIMINANT_RTOL = 1e-12
ROOT_MATCH_RTOL = 1e-9

__all__ = [
    "CubicPoly",
    "CurveData",
    "discriminant",
    "roots_from_invariants",
    "invariants_from_roots",
    "jacobi_modulus",
    "periods",
    "curve_from_invariants",
    "theta_root_residuals",
    "roots_from_theta_constants",
    "cycle_integral",
    "elliptic_first",
    "elliptic_third",
]


@dataclass(frozen=True)
class CubicPoly:
    """c3 x^3 + c2 x^2 + c1 x + c0 with c3 != 0."""

    c3: complex
    c2: complex
    c1: complex
    c0: complex

    def __post_init__(self):
        coeffs = [self.c3, self.c2, self.c1, self.c0]
        for name, v in zip(("c3", "c2", "c1", "c0"), coeffs):
            v = complex(v)
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise DomainError(f"coefficient {name} is not finite")
            object.__setattr__(self, name, v.real if v.imag == 0 else v)
        if self.c3 == 0:
            raise DomainError("leading coefficient must be non-zero")

    @property
    def coefficients(self) -> tuple:
        return (self.c3, self.c2, self.c1, self.c0)

    @property
    def is_real(self) -> bool:
        return all(not isinstance(c, complex) for c in self.coefficients)

    def __call__(self, x):
        return ((self.c3 * x + self.c2) * x + self.c1) * x + self.c0

    def derivative(self, x):
        return (3 * self.c3 * x + 2 * self.c2) * x + self.c1

    def discriminant(self):
        a, b, c, d = self.coefficients
        return 18 * a * b * c * d - 4 * b**3 * d + b * b * c * c - 4 * a * c**3 - 27 * a * a * d * d

    def roots(self) -> tuple:
        """All three roots, Newton-polished.

        Real cubics with three real roots return floats sorted ascending;
        otherwise complex roots sorted by descending real part, then
        descending imaginary part.
        """
        if self.is_real and self.discriminant() > 0:
            return tuple(sorted(_polish(self, r) for r in _trig_roots(self)))
        raw = np.roots(np.array(self.coefficients, dtype=complex))
        return _order_complex(tuple(_polish(self, complex(r)) for r in raw))

    def min_root_gap(self) -> float:
        r = self.roots()
        return min(abs(r[0] - r[1]), abs(r[0] - r[2]), abs(r[1] - r[2]))


def _trig_roots(poly: CubicPoly):
    a, b, c, d = (float(v) for v in poly.coefficients)
    shift = -b / (3 * a)
    p = (3 * a * c - b * b) / (3 * a * a)
    q = (2 * b**3 - 9 * a * b * c + 27 * a * a * d) / (27 * a**3)
    if p >= 0:  # pragma: no cover - excluded by positive discriminant
        raise DegenerateCurveError("cubic does not have three distinct real roots")
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = max(-1.0, min(1.0, 3.0 * q / (p * m)))
    phi = math.acos(arg) / 3.0
    return [shift + m * math.cos(phi - 2.0 * math.pi * k / 3.0) for k in range(3)]


def _polish(poly: CubicPoly, r, steps: int = 3):
    for _ in range(steps):
        d = poly.derivative(r)
        if d == 0:
            break
        nr = r - poly(r) / d
        if abs(poly(nr)) >= abs(poly(r)):
            break
        r = nr
    if isinstance(r, complex) and poly.is_real and abs(r.imag) <= 1e-14 * max(1.0, abs(r.real)):
        return r.real
    return r


def _order_complex(roots, tol: float = 1e-12):
    scale = max(1.0, max(abs(r) for r in roots))
    rs = sorted((complex(r) for r in roots), key=lambda r: -r.real)
    # ties in the real part (within tolerance) are broken by descending Im
    changed = True
    while changed:
        changed = False
        for i in range(len(rs) - 1):
            if abs(rs[i].real - rs[i + 1].real) <= tol * scale and rs[i].imag < rs[i + 1].imag:
                rs[i], rs[i + 1] = rs[i + 1], rs[i]
                changed = True
    return tuple(rs)


def discriminant(g2, g3):
    """g2^3 - 27 g3^2 (vanishes exactly for a repeated root)."""
    return g2**3 - 27 * g3**2


def _check_nondegenerate(g2, g3) -> None:
    scale = max(abs(g2) ** 3, 27 * abs(g3) ** 2)
    if scale == 0 or abs(discriminant(g2, g3)) <= DISCRIMINANT_RTOL * scale:
        raise DegenerateCurveError(f"curve (g2={g2}, g3={g3}) has a repeated root")


def roots_from_invariants(g2, g3) -> tuple:
    """Roots (e1, e2, e3) of 4x^3 - g2 x - g3.

    Three real roots come out as floats with e1 > e2 > e3; otherwise roots
    are complex, ordered by descending real part and then descending
    imaginary part. This ordering is a label convention only.
    """
    _check_nondegenerate(g2, g3)
    poly = CubicPoly(4.0, 0.0, -g2, -g3)
    r = poly.roots()
    if all(isinstance(v, float) for v in r):
        return tuple(sorted(r, reverse=True))
    return _order_complex(r)


def invariants_from_roots(roots) -> tuple:
    """(g2, g3) from the roots, via 4(x-e1)(x-e2)(x-e3)."""
    e1, e2, e3 = roots
    g2 = -4 * (e1 * e2 + e1 * e3 + e2 * e3)
    g3 = 4 * e1 * e2 * e3
    return g2, g3


def jacobi_modulus(roots) -> tuple:
    """(k^2, k'^2) with k^2 = (e2 - e3)/(e1 - e3) and k'^2 = 1 - k^2."""
    e1, e2, e3 = roots
    scale = max(abs(e1), abs(e2), abs(e3), 1e-300)
    if abs(e1 - e3) <= DISCRIMINANT_RTOL * scale:
        raise DegenerateCurveError("e1 and e3 coincide")
    k_sq = (e2 - e3) / (e1 - e3)
    # k'^2 = (e1 - e2)/(e1 - e3) is 1 - k^2 up to rounding; report 1 - k^2 so the
    # complement holds exactly.
    return k_sq, 1 - k_sq


def _real_roots(g2, g3) -> tuple:
    roots = roots_from_invariants(g2, g3)
    if not all(isinstance(v, float) for v in roots):
        raise UnsupportedCurveError("periods are implemented for curves with three real roots")
    return roots


def periods(g2, g3) -> tuple:
    """Half-periods (omega, omega', tau) of a curve with three real roots."""
    e1, e2, e3 = _real_roots(g2, g3)
    omega = carlson_rf(0.0, e1 - e2, e1 - e3)
    omega_prime = 1j * carlson_rf(0.0, e2 - e3, e1 - e3)
    return omega, omega_prime, omega_prime / omega


@dataclass(frozen=True)
class CurveData:
    """A nondegenerate Weierstrass curve with its derived quantities."""

    g2: complex
    g3: complex
    roots: tuple
    omega: complex
    omega_prime: complex
    tau: ModularParameter
    k_sq: complex
    kp_sq: complex = field(default=None)

    def __post_init__(self):
        e1, e2, e3 = self.roots
        scale = max(abs(e1), abs(e2), abs(e3))
        if abs(e1 + e2 + e3) > 1e-12 * scale:
            raise DomainError("roots must sum to zero")
        gaps = (abs(e1 - e2), abs(e1 - e3), abs(e2 - e3))
        if min(gaps) <= 1e-12 * scale:
            raise DegenerateCurveError("roots must be pairwise distinct")
        g2, g3 = invariants_from_roots(self.roots)
        coeff_scale = max(abs(self.g2), abs(self.g3), scale**3, 1e-300)
        if abs(g2 - self.g2) > 1e-12 * coeff_scale or abs(g3 - self.g3) > 1e-12 * coeff_scale:
            raise DomainError("roots do not match the invariants")
        if not isinstance(self.tau, ModularParameter):
            object.__setattr__(self, "tau", ModularParameter(self.tau))
        if abs(self.tau.value - self.omega_prime / self.omega) > 1e-12 * abs(self.tau.value):
            raise DomainError("tau must equal omega'/omega")
        if self.kp_sq is None:
            object.__setattr__(self, "kp_sq", 1 - self.k_sq)


def curve_from_invariants(g2, g3) -> CurveData:
    roots = _real_roots(g2, g3)
    omega, omega_prime, tau = periods(g2, g3)
    k_sq, kp_sq = jacobi_modulus(roots)
    return CurveData(g2, g3, roots, omega, omega_prime, ModularParameter(tau), k_sq, kp_sq)


def roots_from_theta_constants(omega, tau) -> tuple:
    """Roots (e1, e2, e3) rebuilt from theta constants at tau.

    e1 =  pi^2/(12 omega^2) (theta3^4 + theta4^4)
    e2 =  pi^2/(12 omega^2) (theta2^4 - theta4^4)
    e3 = -pi^2/(12 omega^2) (theta2^4 + theta3^4)
    """
    c = math.pi**2 / (12.0 * omega * omega)
    t2 = theta2(0, tau) ** 4
    t3 = theta3(0, tau) ** 4
    t4 = theta4(0, tau) ** 4
    return c * (t3 + t4), c * (t2 - t4), -c * (t2 + t3)


def theta_root_residuals(curve: CurveData) -> tuple:
    """Residuals of the root / theta-constant relations, relative to max|e_i|.

    Returns (r1, r2, r3) for e2 - e3 = (pi/2w)^2 theta2^4,
    e1 - e2 = (pi/2w)^2 theta4^4, and the worst of the three e_i formulas.
    """
    e1, e2, e3 = curve.roots
    scale = max(abs(e1), abs(e2), abs(e3))
    c = (math.pi / (2.0 * curve.omega)) ** 2
    tau = curve.tau
    r1 = abs(e2 - e3 - c * theta2(0, tau) ** 4) / scale
    r2 = abs(e1 - e2 - c * theta4(0, tau) ** 4) / scale
    rebuilt = roots_from_theta_constants(curve.omega, tau)
    r3 = max(abs(a - b) for a, b in zip(curve.roots, rebuilt)) / scale
    return r1, r2, r3


def cycle_integral(roots, enclosed: tuple, n: int = 2048) -> complex:
    """Integral of dz / sqrt(P) around an ellipse enclosing two roots.

    ``enclosed`` names two root indices; the contour is traversed
    counterclockwise with sqrt(P) continued along it. The trapezoid rule is
    spectrally accurate here because the continued integrand is periodic
    and analytic on the contour.
    """
    roots = tuple(complex(r) for r in roots)
    i, j = enclosed
    other = roots[3 - i - j]
    a, b = roots[i], roots[j]
    centre = 0.5 * (a + b)
    half = 0.5 * abs(b - a)
    rot = (b - a) / abs(b - a)
    clearance = min(abs(other - a), abs(other - b))
    # semi-axes chosen to keep the third root well outside the contour
    major = half + 0.35 * min(clearance, half)
    minor = 0.35 * min(clearance, half) + 0.5 * half
    s = 2.0 * math.pi * np.arange(n) / n
    z = centre + rot * (major * np.cos(s) + 1j * minor * np.sin(s))
    dz = rot * (-major * np.sin(s) + 1j * minor * np.cos(s))
    p = 4.0 * (z - roots[0]) * (z - roots[1]) * (z - roots[2])
    w = np.sqrt(p.astype(complex))
    for k in range(1, n):
        if abs(w[k] + w[k - 1]) < abs(w[k] - w[k - 1]):
            w[k] = -w[k]
    if abs(w[0] + w[-1]) < abs(w[0] - w[-1]):
        raise DomainError("square root does not return to its start; contour encloses an odd number of roots")
    return complex(np.sum(dz / w) * (2.0 * math.pi / n))


def _real_consecutive_roots(limits, poly: CubicPoly):
    if not poly.is_real:
        raise RootOrderError("complete integrals need a real cubic")
    roots = poly.roots()
    if not all(isinstance(r, float) for r in roots):
        raise RootOrderError("complete integrals need three real roots")
    a, b = (float(v) for v in limits)
    if not a < b:
        raise RootOrderError("limits must satisfy a < b")
    tol = ROOT_MATCH_RTOL * max(1.0, max(abs(r) for r in roots))
    for i in range(2):
        lo, hi = roots[i], roots[i + 1]
        if abs(a - lo) <= tol and abs(b - hi) <= tol:
            other = roots[2] if i == 0 else roots[0]
            if poly(0.5 * (lo + hi)) <= 0:
                raise RootOrderError("polynomial is not positive between the limits")
            return lo, hi, other
    raise RootOrderError("limits are not consecutive roots of the polynomial")


def _first_kind(a: float, b: float, r: float, lead: float) -> float:
    if r > b:
        return 2.0 * carlson_rf(0.0, r - b, r - a) / math.sqrt(lead)
    return 2.0 * carlson_rf(0.0, a - r, b - r) / math.sqrt(-lead)


def _third_kind(a: float, b: float, r: float, lead: float, a_minus_c: float, b_minus_c: float) -> float:
    """int_a^b dx / ((x - c) sqrt(lead (x-a)(x-b)(x-r))) for c outside [a, b].

    The pole enters only through a - c and b - c, so callers that know these
    gaps more accurately than the difference of rounded numbers can pass
    them directly.
    """
    if r < a:
        # reflect x -> -x so the third root lies to the right
        return -_third_kind(-b, -a, -r, -lead, -b_minus_c, -a_minus_c)
    if a_minus_c * b_minus_c <= 0:
        raise PoleOnPathError("pole lies on the integration interval")
    # Map [a, b] onto (0, inf) with the endpoint nearest the pole at t = 0,
    # so the pole lands at a small p and R_F and R_J add without cancelling.
    if abs(a_minus_c) <= abs(b_minus_c):
        p = a_minus_c / b_minus_c
        q = (r - a) / (r - b)
        gap = (b - a) / b_minus_c
        scale = b_minus_c * math.sqrt(r - b)
    else:
        p = b_minus_c / a_minus_c
        q = (r - b) / (r - a)
        gap = (a - b) / a_minus_c
        scale = a_minus_c * math.sqrt(r - a)
    bracket = 2.0 * carlson_rf(0.0, q, 1.0) + (2.0 / 3.0) * gap * carlson_rj(0.0, q, 1.0, p)
    return bracket / (scale * math.sqrt(lead))


def elliptic_first(limits, poly: CubicPoly) -> float:
    """Complete integral of dx/sqrt(poly) between consecutive real roots."""
    a, b, r = _real_consecutive_roots(limits, poly)
    return _first_kind(a, b, r, float(poly.c3))


def elliptic_third(limits, poly: CubicPoly, c: float) -> float:
    """Complete integral of dx/((x - c) sqrt(poly)) between consecutive real roots.

    Raises PoleOnPathError when c lies in the closed interval.
    """
    a, b, r = _real_consecutive_roots(limits, poly)
    c = float(c)
    if a <= c <= b:
        raise PoleOnPathError(f"pole c={c} lies in [{a}, {b}]")
    return _third_kind(a, b, r, float(poly.c3), a - c, b - c)
