"""Spherical pendulum: rotation number and return time around the focus-focus value.

The reduced motion is governed by the cubic

    P(x) = 2 (h - x)(1 - x^2) - j^2 = 2 (x - x-)(x - x+)(x - x0),

and on a regular value (j, h)

    Theta = 2 j int_{x-}^{x+} dx / ((1 - x^2) sqrt(P)),
    T     = 2   int_{x-}^{x+} dx / sqrt(P).

Rotation numbers are reported in radians (``theta_raw``) and in turns
(``theta_hat = theta_raw / 2 pi``). The circuit is j = j0 + eps cos t,
h = h0 + eps sin t on the offset grid t_k = 2 pi (k + 1/2) / N, which never
hits t = pi/2 or 3 pi/2 for N divisible by four.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .errors import DegeneratePointError, DomainError, NonIntegralVariationError, RefinementExceededError
from .monodromy import B2, PhaseGate, UnimodularMatrix, heat_holonomy, quantum_dual
from .thetafn import ModularParameter
from .weierstrass import CubicPoly, _first_kind, _third_kind

EPSILON_DEFAULT = 0.05
EPSILON_MAX = 0.1
N_DEFAULT = 2048
N_MIN = 256
N_MAX = 2**20
STEP_LIMIT = 0.25
INTEGER_TOL = 0.01
PERIOD_RTOL = 1e-6
GAP_TOL = 1e-12

__all__ = [
    "PendulumPoint",
    "CircuitSample",
    "CircuitTrace",
    "MonodromyCertificate",
    "pendulum_poly",
    "pendulum_roots",
    "rotation_and_period",
    "circuit_point",
    "trace_circuit",
    "certify",
    "tau_of_point",
    "winding_number",
]


@dataclass(frozen=True)
class PendulumPoint:
    j: float
    h: float

    def __post_init__(self):
        object.__setattr__(self, "j", float(self.j))
        object.__setattr__(self, "h", float(self.h))
        if not (math.isfinite(self.j) and math.isfinite(self.h)):
            raise DomainError("pendulum point must be finite")


@dataclass(frozen=True)
class _Roots:
    x_minus: float
    x_plus: float
    x_zero: float
    # accurate small offsets from the poles +-1
    d_minus: float  # 1 + x-
    d_plus: float  # 1 - x+
    d_zero: float  # x0 - 1


def pendulum_poly(p: PendulumPoint) -> CubicPoly:
    """2x^3 - 2h x^2 - 2x + (2h - j^2)."""
    return CubicPoly(2.0, -2.0 * p.h, -2.0, 2.0 * p.h - p.j * p.j)


def _roots(p: PendulumPoint) -> _Roots:
    poly = pendulum_poly(p)
    if not poly.discriminant() > 0:
        raise DegeneratePointError(f"(j, h) = ({p.j}, {p.h}) is not a regular value")
    r = sorted(poly.roots())
    if min(r[1] - r[0], r[2] - r[1]) <= GAP_TOL:
        raise DegeneratePointError(f"(j, h) = ({p.j}, {p.h}) has a repeated root")
    x_minus, x_plus, x_zero = r
    j2 = p.j * p.j
    # P(-1) = -j^2 = -2 (1 + x-)(1 + x+)(1 + x0)
    d_minus = j2 / (2.0 * (1.0 + x_plus) * (1.0 + x_zero))
    # P(1) = -j^2 = -2 (1 - x-)(1 - x+)(x0 - 1): the larger of the two
    # remaining offsets is accurate as computed, the smaller follows from it
    prod = j2 / (2.0 * (2.0 - d_minus))
    u, v = 1.0 - x_plus, x_zero - 1.0
    if abs(u) >= abs(v):
        v = prod / u if u != 0 else 0.0
    else:
        u = prod / v
    if d_minus < 0 or u < 0 or v < 0:
        raise DegeneratePointError(f"(j, h) = ({p.j}, {p.h}) lies outside the physical region")
    return _Roots(-1.0 + d_minus, 1.0 - u, 1.0 + v, d_minus, u, v)


def pendulum_roots(p: PendulumPoint) -> tuple:
    """(x-, x+, x0) with x- < x+ < x0; -1 <= x- and x+ <= 1 <= x0."""
    r = _roots(p)
    return r.x_minus, r.x_plus, r.x_zero


def _rotation_and_period(p: PendulumPoint, r: _Roots) -> tuple:
    a, b, c = r.x_minus, r.x_plus, r.x_zero
    period = 2.0 * _first_kind(a, b, c, 2.0)
    if p.j == 0.0:
        # one-sided limit j -> 0+: each pole touching the interval contributes pi
        theta = math.pi * ((r.d_minus == 0.0) + (r.d_plus == 0.0))
        return theta, period
    # 1/(1 - x^2) = (1/2) [1/(1 + x) - 1/(x - 1)]
    i_minus = _third_kind(a, b, c, 2.0, r.d_minus, 2.0 - r.d_plus)
    i_plus = _third_kind(a, b, c, 2.0, -(2.0 - r.d_minus), -r.d_plus)
    theta = p.j * (i_minus - i_plus)
    return theta, period


def rotation_and_period(p: PendulumPoint) -> tuple:
    """(Theta in radians, T) at a regular point."""
    return _rotation_and_period(p, _roots(p))


def tau_of_point(p: PendulumPoint) -> ModularParameter:
    """tau = -Theta + i T with Theta in turns (the radian value is -2 pi Re tau)."""
    theta, period = rotation_and_period(p)
    return ModularParameter(complex(-theta / (2.0 * math.pi), period))


@dataclass(frozen=True)
class CircuitSample:
    t: float
    j: float
    h: float
    x_minus: float
    x_plus: float
    x_zero: float
    theta_raw: float
    T: float
    theta_hat_unwrapped: float

    COLUMNS = ("t", "j", "h", "x_minus", "x_plus", "x_zero", "theta_raw", "T", "theta_hat_unwrapped")

    def row(self) -> tuple:
        return tuple(getattr(self, c) for c in self.COLUMNS)


@dataclass(frozen=True)
class CircuitTrace:
    """A sampled circuit. ``closure`` re-evaluates the start point after the full loop."""

    epsilon: float
    samples: tuple
    closure: CircuitSample
    center: tuple = (0.0, 1.0)
    turns: int = 1
    orientation: int = 1
    n_per_turn: int = 0
    refinements: int = 0

    @property
    def max_step(self) -> float:
        vals = [s.theta_hat_unwrapped for s in self.samples] + [self.closure.theta_hat_unwrapped]
        return max(abs(b - a) for a, b in zip(vals, vals[1:]))

    @property
    def mean_T(self) -> float:
        return math.fsum(s.T for s in self.samples) / len(self.samples)


@dataclass(frozen=True)
class MonodromyCertificate:
    delta_theta_hat: float
    delta_T: float
    m: int
    classical_matrix: UnimodularMatrix
    quantum_matrix: UnimodularMatrix
    gate: PhaseGate
    mean_T: float = field(default=float("nan"))


def circuit_point(t: float, epsilon: float, center=(0.0, 1.0), orientation: int = 1) -> PendulumPoint:
    j0, h0 = center
    return PendulumPoint(j0 + epsilon * math.cos(t), h0 + orientation * epsilon * math.sin(t))


def _evaluate(args) -> tuple:
    t, epsilon, center, orientation = args
    p = circuit_point(t, epsilon, center, orientation)
    r = _roots(p)
    theta, period = _rotation_and_period(p, r)
    return (t, p.j, p.h, r.x_minus, r.x_plus, r.x_zero, theta, period)


def _unwrap_next(prev: float, value: float) -> float:
    return value + round(prev - value)


def _trace_once(epsilon, n, center, turns, orientation, workers) -> CircuitTrace:
    total = n * turns
    ts = [2.0 * math.pi * (k + 0.5) / n for k in range(total)]
    jobs = [(t, epsilon, center, orientation) for t in ts + [ts[0] + 2.0 * math.pi * turns]]
    if workers > 1 and total >= 1024:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    else:
        rows = [_evaluate(job) for job in jobs]

    samples = []
    prev = None
    for row in rows:
        hat = row[6] / (2.0 * math.pi)
        hat = hat if prev is None else _unwrap_next(prev, hat)
        samples.append(CircuitSample(*row, hat))
        prev = hat
    return CircuitTrace(
        epsilon=epsilon,
        samples=tuple(samples[:-1]),
        closure=samples[-1],
        center=tuple(center),
        turns=turns,
        orientation=orientation,
        n_per_turn=n,
    )


def trace_circuit(
    epsilon: float = EPSILON_DEFAULT,
    n_samples: int = N_DEFAULT,
    *,
    center=(0.0, 1.0),
    turns: int = 1,
    orientation: int = 1,
    workers: int | None = None,
) -> CircuitTrace:
    """Sample Theta and T around the circuit, doubling N until consecutive
    unwrapped rotation numbers differ by less than a quarter turn.

    ``orientation=-1`` traverses the same circle clockwise. Raises
    RefinementExceededError if the contract fails at N_MAX.
    """
    if not 0 < epsilon <= EPSILON_MAX:
        raise DomainError(f"epsilon must lie in (0, {EPSILON_MAX}], got {epsilon}")
    if n_samples < N_MIN:
        raise DomainError(f"n_samples must be at least {N_MIN}, got {n_samples}")
    if turns < 1 or orientation not in (1, -1):
        raise DomainError("turns must be positive and orientation +-1")
    if workers is None:
        workers = int(os.environ.get("MONODROMY_LAB_THREADS", "1") or 1)
    n, depth = int(n_samples), 0
    while True:
        trace = _trace_once(float(epsilon), n, tuple(map(float, center)), int(turns), int(orientation), workers)
        if trace.max_step < STEP_LIMIT:
            return replace(trace, refinements=depth)
        if 2 * n * turns > N_MAX:
            raise RefinementExceededError(
                f"unwrapped rotation number still jumps by {trace.max_step:.3f} turns at N = {n}; reduce epsilon"
            )
        n, depth = 2 * n, depth + 1


def certify(
    trace: CircuitTrace, *, integer_tol: float = INTEGER_TOL, period_rtol: float = PERIOD_RTOL
) -> MonodromyCertificate:
    """Monodromy certificate from a traced circuit.

    m = -round(delta Theta_hat); the classical matrix is b2^m, the quantum
    one its inverse transpose b1^m, and the gate is the heat holonomy
    diag(1, i^m). Raises NonIntegralVariationError when the net variation is
    not within ``integer_tol`` of an integer or T fails to close up to
    ``period_rtol`` relative.
    """
    first = trace.samples[0]
    delta = trace.closure.theta_hat_unwrapped - first.theta_hat_unwrapped
    delta_T = trace.closure.T - first.T
    mean_T = trace.mean_T
    nearest = round(delta)
    if abs(delta - nearest) >= integer_tol:
        raise NonIntegralVariationError(
            f"net variation {delta:.6f} turns is not integral; refine the grid or shrink epsilon"
        )
    if abs(delta_T) >= period_rtol * mean_T:
        raise NonIntegralVariationError(f"return time does not close up: delta T = {delta_T:.3e}")
    m = -int(nearest)
    classical = B2**m
    return MonodromyCertificate(
        delta_theta_hat=delta,
        delta_T=delta_T,
        m=m,
        classical_matrix=classical,
        quantum_matrix=quantum_dual(classical),
        gate=heat_holonomy(m),
        mean_T=mean_T,
    )


def winding_number(center, point=(0.0, 1.0), turns: int = 1, orientation: int = 1, epsilon: float = EPSILON_DEFAULT) -> int:
    """Winding number, in the (j, h) plane, of the circuit about ``point``."""
    dj, dh = point[0] - center[0], point[1] - center[1]
    inside = dj * dj + dh * dh < epsilon * epsilon
    return orientation * turns if inside else 0
