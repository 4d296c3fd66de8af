"""Bohr-Sommerfeld bookkeeping on a model torus.

Cycles are normalised so that the integral of d(phi_j) over gamma_k is
2 pi delta_jk. Actions are row vectors and quantum numbers column vectors:
a change of cycle basis Z acts on actions by I -> I Z^{-1} and on quantum
numbers by n -> Z^{-T} n.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError, NonUnitaryHolonomyError
from .monodromy import UnimodularMatrix, quantum_dual

BS_TOL = 1e-9
UNIT_TOL = 1e-12

__all__ = [
    "QuantumNumberVector",
    "ActionVector",
    "period_map",
    "bs_check",
    "holonomy_to_action",
    "action_to_holonomy",
    "lattice_action",
    "shift_conjugation_check",
    "action_coordinate_change",
    "pairing",
]


@dataclass(frozen=True)
class QuantumNumberVector:
    n: tuple

    def __post_init__(self):
        vals = tuple(self.n)
        for v in vals:
            if isinstance(v, bool) or int(v) != v:
                raise DomainError(f"quantum numbers must be integers, got {v!r}")
        object.__setattr__(self, "n", tuple(int(v) for v in vals))

    def __iter__(self):
        return iter(self.n)

    def __len__(self) -> int:
        return len(self.n)


@dataclass(frozen=True)
class ActionVector:
    I: tuple

    def __post_init__(self):
        vals = tuple(self.I)
        for v in vals:
            if not math.isfinite(v):
                raise DomainError("actions must be finite")
        object.__setattr__(self, "I", vals)

    def __iter__(self):
        return iter(self.I)

    def __len__(self) -> int:
        return len(self.I)


def period_map(I: ActionVector) -> tuple:
    """(1/2pi) times the cycle integrals of sum I_k dphi_k.

    With the model-torus normalisation this is the action vector itself.
    """
    return tuple(I.I)


def bs_check(I: ActionVector, tol: float = BS_TOL) -> bool:
    """True when every period is within ``tol`` of an integer."""
    return all(abs(p - round(p)) <= tol for p in period_map(I))


def holonomy_to_action(hol, winding) -> ActionVector:
    """Actions from per-cycle holonomies, I_k = (arg hol_k + 2 pi w_k) / 2 pi.

    The holonomy only fixes the action modulo 1, so the integer part has to
    come from the caller as ``winding``. arg uses the principal branch
    (-pi, pi].
    """
    hol = tuple(complex(h) for h in hol)
    winding = tuple(winding)
    if len(hol) != len(winding):
        raise DomainError("one winding number is needed per cycle")
    out = []
    for h, w in zip(hol, winding):
        if abs(abs(h) - 1.0) > UNIT_TOL:
            raise NonUnitaryHolonomyError(f"|hol| = {abs(h)!r} is not 1")
        out.append((cmath.phase(h) + 2.0 * math.pi * int(w)) / (2.0 * math.pi))
    return ActionVector(tuple(out))


def action_to_holonomy(I: ActionVector) -> tuple:
    """exp(2 pi i I_k) per cycle, together with the integer parts removed by arg."""
    hol = tuple(cmath.exp(2j * math.pi * v) for v in I.I)
    winding = tuple(round(v - cmath.phase(h) / (2.0 * math.pi)) for v, h in zip(I.I, hol))
    return hol, winding


def _check_two(v) -> None:
    if len(v) != 2:
        raise DomainError("SL(2, Z) acts on two-component vectors only")


def lattice_action(Z: UnimodularMatrix, n: QuantumNumberVector) -> QuantumNumberVector:
    """Quantum numbers in the new basis: Z^{-T} n."""
    _check_two(n)
    return QuantumNumberVector(quantum_dual(Z).apply(n.n))


def _multiply_by_character(f: dict, k: tuple) -> dict:
    """Multiply a Fourier series {n: coeff} by chi_k = exp(i k.phi)."""
    return {tuple(a + b for a, b in zip(n, k)): c for n, c in f.items()}


def _minus_i_d_phi(f: dict, axis: int) -> dict:
    """-i d/dphi_axis on a Fourier series: chi_n -> n_axis chi_n."""
    return {n: n[axis] * c for n, c in f.items() if n[axis] * c != 0}


def shift_conjugation_check(n: QuantumNumberVector, times: int = 1) -> bool:
    """Check U^t (-i d/dphi2) U^{-t} = -i d/dphi2 + t Id on the character chi_n.

    U is multiplication by exp(-i phi2), i.e. the lattice shift n2 -> n2 - 1
    (so U^{-1} raises n2 by one). Both sides are evaluated on chi_n as finite
    Fourier series and compared coefficientwise.
    """
    _check_two(n)
    u = (0, -int(times))
    u_inv = (0, int(times))
    chi = {n.n: 1}
    lhs = _multiply_by_character(_minus_i_d_phi(_multiply_by_character(chi, u_inv), 1), u)
    rhs = _minus_i_d_phi(chi, 1)
    rhs[n.n] = rhs.get(n.n, 0) + int(times)
    clean = lambda f: {k: v for k, v in f.items() if v != 0}
    return clean(lhs) == clean(rhs)


def action_coordinate_change(Z: UnimodularMatrix, I: ActionVector) -> ActionVector:
    """Actions in the new basis: the row vector I Z^{-1}."""
    _check_two(I)
    return ActionVector(Z.inverse().apply_row(I.I))


def pairing(I, n):
    """<I, n> = sum I_k n_k."""
    return sum(a * b for a, b in zip(I, n))
