"""Jacobi theta functions, characteristics and k-level thetas.

Conventions
-----------
The standard theta function is

    theta(z, tau) = sum_n exp(i pi n^2 tau + 2 pi i n z),

theta functions with characteristics follow Mumford's notation, and the
k-level functions are

    theta_{k,j}(z, tau) = sum_n exp((i pi / k)(k n + j)^2 tau + 2 pi i (k n + j) z).

All series are summed over a window centred on the dominant term, so the
truncation tail stays below 1e-16 relative to the largest term for any
admissible ``z``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, RangeError

IM_MIN = 0.05
Z_IM_MAX = 10.0
K_MAX = 16

__all__ = [
    "IM_MIN",
    "Z_IM_MAX",
    "K_MAX",
    "ModularParameter",
    "Characteristic",
    "ThetaVector2",
    "as_tau",
    "series_cutoff",
    "theta",
    "theta_char",
    "theta1",
    "theta2",
    "theta3",
    "theta4",
    "level_theta",
    "modified_prefactor",
    "modified_level_theta",
    "theta_vector2",
    "heat_residual",
    "HEAT_COEFFICIENTS",
]


@dataclass(frozen=True)
class ModularParameter:
    """A point of the upper half-plane."""

    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise DomainError(f"tau must be finite, got {v!r}")
        if v.imag <= 0:
            raise DomainError(f"tau must lie in the upper half-plane, got {v!r}")
        object.__setattr__(self, "value", v)

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag

    def translate(self, m: int) -> "ModularParameter":
        """Return tau + m."""
        return ModularParameter(self.value + m)

    def __complex__(self) -> complex:
        return self.value


TauLike = Union[ModularParameter, complex, float]


def as_tau(tau: TauLike) -> ModularParameter:
    if isinstance(tau, ModularParameter):
        return tau
    return ModularParameter(complex(tau))


@dataclass(frozen=True)
class Characteristic:
    """Half-integer characteristic (a, b) with a, b in {0, 1/2}."""

    a: float
    b: float

    def __post_init__(self):
        for name in ("a", "b"):
            v = float(getattr(self, name))
            if v not in (0.0, 0.5):
                raise DomainError(f"characteristic {name} must be 0 or 1/2, got {v}")
            object.__setattr__(self, name, v)


# Dictionary between Mumford's labels and the traditional names.
CHAR_THETA1 = Characteristic(0.5, 0.5)
CHAR_THETA2 = Characteristic(0.5, 0.0)
CHAR_THETA3 = Characteristic(0.0, 0.0)
CHAR_THETA4 = Characteristic(0.0, 0.5)


@dataclass(frozen=True)
class ThetaVector2:
    """Coordinates in the ordered basis (modified theta_{2,0}, modified theta_{2,1})."""

    c0: complex
    c1: complex

    def __post_init__(self):
        for name in ("c0", "c1"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise DomainError(f"theta vector entry {name} is not finite")
            object.__setattr__(self, name, v)

    def as_array(self) -> np.ndarray:
        return np.array([self.c0, self.c1], dtype=complex)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


def series_cutoff(im_tau: float) -> int:
    """Half-width of the summation window for the given Im(tau)."""
    return math.ceil(math.sqrt(40.0 / (math.pi * im_tau))) + 5


def _check_args(z: complex, tau: ModularParameter) -> None:
    if tau.imag < IM_MIN:
        raise DomainError(
            f"Im(tau) = {tau.imag:g} is below IM_MIN = {IM_MIN:g}; modular reduction is not supported"
        )
    if abs(z.imag) > Z_IM_MAX:
        raise OverflowError(f"|Im z| = {abs(z.imag):g} exceeds Z_IM_MAX = {Z_IM_MAX:g}")


def _check_level(k: int, j: int) -> None:
    if int(k) != k or int(j) != j:
        raise RangeError("level k and index j must be integers")
    if not 1 <= k <= K_MAX:
        raise RangeError(f"level k must lie in [1, {K_MAX}], got {k}")
    if not 0 <= j < k:
        raise RangeError(f"index j must lie in [0, {k}), got {j}")


def _exponents(k: int, j: int, z: complex, tau: complex, cutoff: int | None) -> np.ndarray:
    """Frequencies m = k n + j in the window around the dominant term."""
    t = tau.imag
    half = cutoff if cutoff is not None else series_cutoff(k * t)
    # |term| = exp(-pi t m^2 / k - 2 pi m Im z) peaks at m = -k Im z / t
    n0 = round((-k * z.imag / t - j) / k)
    n = np.arange(n0 - half, n0 + half + 1)
    return k * n + j


def _terms(k: int, j: int, z: complex, tau: complex, cutoff: int | None = None):
    m = _exponents(k, j, z, tau, cutoff).astype(float)
    return m, np.exp(1j * math.pi * m * m * tau / k + 2j * math.pi * m * z)


def _lattice_sum(k: int, j: int, z: complex, tau: complex, cutoff: int | None = None) -> complex:
    _, terms = _terms(k, j, z, tau, cutoff)
    return complex(terms.sum())


def theta(z: complex, tau: TauLike, *, cutoff: int | None = None) -> complex:
    """Standard Jacobi theta function.

    Raises DomainError when Im(tau) < IM_MIN and OverflowError when
    |Im z| > Z_IM_MAX. ``cutoff`` overrides the window half-width.
    """
    tau = as_tau(tau)
    z = complex(z)
    _check_args(z, tau)
    return _lattice_sum(1, 0, z, tau.value, cutoff)


def theta_char(chi: Characteristic, z: complex, tau: TauLike, *, cutoff: int | None = None) -> complex:
    """Theta function with characteristics.

    exp(pi i a^2 tau + 2 pi i a (z + b)) * theta(z + a tau + b, tau)
    """
    tau = as_tau(tau)
    z = complex(z)
    _check_args(z, tau)
    a, b = chi.a, chi.b
    pref = cmath.exp(1j * math.pi * a * a * tau.value + 2j * math.pi * a * (z + b))
    return pref * _lattice_sum(1, 0, z + a * tau.value + b, tau.value, cutoff)


def theta1(z: complex, tau: TauLike) -> complex:
    return theta_char(CHAR_THETA1, z, tau)


def theta2(z: complex, tau: TauLike) -> complex:
    return theta_char(CHAR_THETA2, z, tau)


def theta3(z: complex, tau: TauLike) -> complex:
    return theta_char(CHAR_THETA3, z, tau)


def theta4(z: complex, tau: TauLike) -> complex:
    return theta_char(CHAR_THETA4, z, tau)


def level_theta(k: int, j: int, z: complex, tau: TauLike, *, cutoff: int | None = None) -> complex:
    """k-level theta function theta_{k,j}(z, tau)."""
    _check_level(k, j)
    tau = as_tau(tau)
    z = complex(z)
    _check_args(z, tau)
    return _lattice_sum(int(k), int(j), z, tau.value, cutoff)


def modified_prefactor(k: int, z: complex, tau: TauLike) -> complex:
    """exp(k pi z^2 / (2 Im tau)); depends on tau only through Im(tau)."""
    tau = as_tau(tau)
    z = complex(z)
    w = k * math.pi * z * z / (2.0 * tau.imag)
    if w.real > 700.0:
        raise OverflowError("modified theta prefactor overflows")
    return cmath.exp(w)


def modified_level_theta(k: int, j: int, z: complex, tau: TauLike) -> complex:
    return modified_prefactor(k, z, tau) * level_theta(k, j, z, tau)


def theta_vector2(z: complex, tau: TauLike) -> ThetaVector2:
    return ThetaVector2(modified_level_theta(2, 0, z, tau), modified_level_theta(2, 1, z, tau))


# Coefficient c in  d/dtau theta + c * d^2/dz^2 theta = 0.
#   "holomorphic": the equation the series above actually satisfies
#   "literal":     1/(4 pi k), the coefficient as usually misprinted without i
#   "opposite":    -1/(4 pi k)
HEAT_COEFFICIENTS = {
    "holomorphic": lambda k: 1j / (4.0 * math.pi * k),
    "literal": lambda k: 1.0 / (4.0 * math.pi * k),
    "opposite": lambda k: -1.0 / (4.0 * math.pi * k),
}


def heat_residual(
    k: int,
    j: int,
    z: complex,
    tau: TauLike,
    step: float = 1e-4,
    *,
    form: str = "holomorphic",
) -> float:
    """Finite-difference residual of the heat equation for theta_{k,j}.

    The tau-derivative averages the central differences along +1 and +i
    (a complex derivative); the z-derivative is the three-point second
    difference. Both stencils are applied to each series term before
    summation, which is algebraically identical to differencing the sum but
    free of the cancellation that would otherwise swamp the O(step^2)
    truncation error.
    """
    if not 1e-6 <= step <= 1e-2:
        raise DomainError(f"step must lie in [1e-6, 1e-2], got {step:g}")
    try:
        coeff = HEAT_COEFFICIENTS[form](k)
    except KeyError:
        raise DomainError(f"unknown heat-equation form {form!r}") from None
    _check_level(k, j)
    tau = as_tau(tau)
    z = complex(z)
    _check_args(z, tau)
    for shifted in (tau.value - step, tau.value - 1j * step):
        if shifted.imag < IM_MIN:
            raise DomainError("finite-difference stencil leaves the admissible tau region")

    m, terms = _terms(k, j, z, tau.value)
    a = math.pi * m * m * step / k
    d_tau_real = terms * (1j * np.sin(a) / step)
    d_tau_imag = terms * (1j * np.sinh(a) / step)
    d_tau = 0.5 * (d_tau_real + d_tau_imag).sum()
    d_zz = (terms * (-4.0 * np.sin(math.pi * m * step) ** 2 / step**2)).sum()
    return abs(d_tau + coeff * d_zz)
