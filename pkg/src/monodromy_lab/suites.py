"""Identity verification suites driven by ``monodromy-lab verify``.

Each suite returns a :class:`Check` holding the worst residual it measured
and the tolerance it is judged against. Inputs are fixed grids or seeded
random draws, so repeated runs produce identical numbers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .carlson import carlson_rf, carlson_rj
from .monodromy import verify_gate_against_theta
from .oracles import pendulum_oracle, quad_rf, quad_rj
from .pendulum import PendulumPoint, rotation_and_period
from .thetafn import heat_residual, level_theta, theta1, theta2, theta3, theta4
from .weierstrass import curve_from_invariants, invariants_from_roots, roots_from_theta_constants, theta_root_residuals

__all__ = [
    "Check",
    "DEFAULT_TOLERANCES",
    "TAU_GRID",
    "Z_SAMPLES",
    "BRIDGE_ROOTS",
    "run_all",
]

DEFAULT_TOLERANCES = {
    "jacobi": 1e-10,
    "translation": 1e-10,
    "level_translation": 1e-10,
    "theta3_modulus": 1e-10,
    "heat": 1e-6,
    "heat_order": 2.0,
    "bridge": 1e-9,
    "lemniscatic_tau": 1e-9,
    "switch": 1e-9,
    "carlson": 1e-10,
    "pendulum_oracle": 1e-8,
    "gate": 1e-11,
}

# Principal square roots on this grid agree with the continued ones; below
# Im tau ~ 0.3 the sqrt(k') law picks up a sign from the branch cut.
TAU_GRID = tuple(complex(re, im) for re in (-0.5, -0.25, 0.0, 0.25, 0.5) for im in (0.5, 0.8, 1.2, 2.0, 3.0))
Z_SAMPLES = (0.1 + 0.05j, 0.37 - 0.2j, -0.23 + 0.31j)

# e1 > e2 > e3 with e1 + e2 + e3 = 0; the first is the lemniscatic curve.
BRIDGE_ROOTS = (
    (1.0, 0.0, -1.0),
    (1.1071627130068788, -0.26958551063604565, -0.83757720237083315),
    (2.0, -0.5, -1.5),
    (1.0, 0.5, -1.5),
    (3.0, -1.0, -2.0),
    (0.7, 0.1, -0.8),
    (5.0, 1.0, -6.0),
    (0.2, -0.05, -0.15),
    (10.0, -4.0, -6.0),
    (1.0, -0.45, -0.55),
    (2.0, 1.9, -3.9),
)


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float
    cases: int

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)


def _rel(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def jacobi_residual(tau: complex) -> float:
    """theta3^4 = theta2^4 + theta4^4, relative to theta3^4."""
    t2, t3, t4 = theta2(0, tau) ** 4, theta3(0, tau) ** 4, theta4(0, tau) ** 4
    return abs(t3 - t2 - t4) / abs(t3)


_EIGHTH = cmath.exp(0.25j * math.pi)


def translation_residual(z: complex, tau: complex) -> float:
    """Worst of the four tau -> tau + 1 lines."""
    t1 = tau + 1
    return max(
        _rel(theta3(z, t1), theta4(z, tau)),
        _rel(theta4(z, t1), theta3(z, tau)),
        _rel(theta2(z, t1), _EIGHTH * theta2(z, tau)),
        _rel(theta1(z, t1), _EIGHTH * theta1(z, tau)),
    )


def level_translation_residual(z: complex, tau: complex) -> float:
    """theta_{2,j}(z, tau + 1) = exp(i pi j^2 / 2) theta_{2,j}(z, tau)."""
    return max(
        _rel(level_theta(2, j, z, tau + 1), cmath.exp(0.5j * math.pi * j * j) * level_theta(2, j, z, tau))
        for j in (0, 1)
    )


def theta3_modulus_residual(tau: complex) -> float:
    """theta3(0, tau + 1) = sqrt(k') theta3(0, tau) with principal roots."""
    k_sq = (theta2(0, tau) / theta3(0, tau)) ** 4
    kp = cmath.sqrt(1 - k_sq)
    return _rel(theta3(0, tau + 1), cmath.sqrt(kp) * theta3(0, tau))


HEAT_CASES = (
    (1, 0, 0.1 + 0.05j, 1j),
    (2, 0, 0.25, 0.1 + 0.5j),
    (2, 1, 0.3 - 0.1j, 0.2 + 0.8j),
    (3, 2, 0.0, 0.5 + 1.5j),
    (4, 1, -0.2 + 0.1j, -0.3 + 1.1j),
)


def heat_order(k: int, j: int, z: complex, tau: complex, step: float = 1e-4) -> float:
    """Residual ratio under step halving; 4 for a second-order stencil."""
    return heat_residual(k, j, z, tau, step) / heat_residual(k, j, z, tau, step / 2)


def bridge_curves():
    for roots in BRIDGE_ROOTS:
        g2, g3 = invariants_from_roots(roots)
        yield curve_from_invariants(g2, g3)


def switch_residual(curve) -> float:
    """Roots rebuilt at tau + 1 against (e1, e3, e2)."""
    e1, e2, e3 = curve.roots
    rebuilt = roots_from_theta_constants(curve.omega, curve.tau.value + 1)
    scale = max(abs(e1), abs(e2), abs(e3))
    return max(abs(a - b) for a, b in zip(rebuilt, (e1, e3, e2))) / scale


def carlson_cases(n: int = 40, seed: int = 7):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        x, y, z, p = (float(v) for v in 10.0 ** rng.uniform(-2, 2, size=4))
        yield x, y, z, p


def pendulum_points(n: int, seed: int = 11, band=(0.01, 0.1)):
    """Regular points at distance band[0]..band[1] from the focus-focus value (0, 1)."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        r = rng.uniform(*band)
        phi = rng.uniform(0.0, 2.0 * math.pi)
        out.append(PendulumPoint(r * math.cos(phi), 1.0 + r * math.sin(phi)))
    return out


def _pendulum_residual(p: PendulumPoint) -> float:
    theta, period = rotation_and_period(p)
    theta_o, period_o = pendulum_oracle(p.j, p.h)
    return max(abs(theta - theta_o) / abs(theta_o), abs(period - period_o) / abs(period_o))


def run_all(tolerances: dict | None = None) -> list[Check]:
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    checks = []

    def add(name, values):
        values = list(values)
        checks.append(Check(name, float(max(values)), float(tol[name]), len(values)))

    add("jacobi", (jacobi_residual(t) for t in TAU_GRID))
    add("translation", (translation_residual(z, t) for t in TAU_GRID for z in Z_SAMPLES))
    add("level_translation", (level_translation_residual(z, t) for t in TAU_GRID for z in Z_SAMPLES))
    add("theta3_modulus", (theta3_modulus_residual(t) for t in TAU_GRID))
    add("heat", (heat_residual(*c) for c in HEAT_CASES))
    add("heat_order", (abs(heat_order(*c) - 4.0) for c in HEAT_CASES))

    curves = list(bridge_curves())
    add("bridge", (max(theta_root_residuals(c)) for c in curves))
    add("lemniscatic_tau", [abs(curves[0].tau.value - 1j)])
    add("switch", (switch_residual(c) for c in curves))

    add(
        "carlson",
        (
            max(
                abs(carlson_rf(x, y, z) - quad_rf(x, y, z)) / quad_rf(x, y, z),
                abs(carlson_rj(x, y, z, p) - quad_rj(x, y, z, p)) / quad_rj(x, y, z, p),
            )
            for x, y, z, p in carlson_cases()
        ),
    )
    add("pendulum_oracle", (_pendulum_residual(p) for p in pendulum_points(8)))

    rng = np.random.default_rng(5)
    add(
        "gate",
        (
            verify_gate_against_theta(m, complex(*rng.uniform(-0.5, 0.5, 2)), complex(rng.uniform(-1, 1), rng.uniform(0.5, 2)))
            for m in (1, 2, 3, 4)
            for _ in range(3)
        ),
    )
    return checks
