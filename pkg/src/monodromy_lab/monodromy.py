"""SL(2, Z) bookkeeping, the Moebius action and the level-2 phase gate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RangeError
from .thetafn import ModularParameter, TauLike, as_tau, theta_vector2

__all__ = [
    "UnimodularMatrix",
    "IDENTITY",
    "Z0",
    "B1",
    "B2",
    "S",
    "moebius_act",
    "quantum_dual",
    "PhaseGate",
    "phase_gate",
    "heat_holonomy",
    "verify_gate_against_theta",
]


@dataclass(frozen=True)
class UnimodularMatrix:
    """Integer 2x2 matrix [[a, b], [c, d]] with determinant one."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v:
                raise DomainError(f"entry {name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.det() != 1:
            raise DomainError(f"determinant must be 1, got {self.det()}")

    @classmethod
    def from_rows(cls, rows) -> "UnimodularMatrix":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __matmul__(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        return UnimodularMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.d, -self.b, -self.c, self.a)

    def transpose(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.a, self.c, self.b, self.d)

    def __pow__(self, m: int) -> "UnimodularMatrix":
        base = self if m >= 0 else self.inverse()
        result = IDENTITY
        for _ in range(abs(int(m))):
            result = result @ base
        return result

    def apply(self, v) -> tuple[int, int]:
        """Matrix times column vector."""
        x, y = v
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def apply_row(self, v) -> tuple:
        """Row vector times matrix."""
        x, y = v
        return (x * self.a + y * self.c, x * self.b + y * self.d)

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


IDENTITY = UnimodularMatrix(1, 0, 0, 1)
Z0 = UnimodularMatrix(1, 1, 0, 1)
B1 = UnimodularMatrix(1, 0, -1, 1)
B2 = UnimodularMatrix(1, 1, 0, 1)
S = UnimodularMatrix(0, -1, 1, 0)


def moebius_act(Z: UnimodularMatrix, tau: TauLike) -> ModularParameter:
    """tau -> (a tau + b) / (c tau + d)."""
    t = as_tau(tau).value
    return ModularParameter((Z.a * t + Z.b) / (Z.c * t + Z.d))


def quantum_dual(mu_c: UnimodularMatrix) -> UnimodularMatrix:
    """Inverse transpose, exact in integers."""
    return mu_c.inverse().transpose()


_QUARTER = (1 + 0j, 1j, -1 + 0j, -1j)


@dataclass(frozen=True)
class PhaseGate:
    """Diagonal unitary diag(1, i^m) acting on the level-2 theta vector.

    Stored by the exponent m mod 4 so products and powers are exact.
    """

    quarter_turns: int
    origin: str = "phase_gate"

    def __post_init__(self):
        object.__setattr__(self, "quarter_turns", int(self.quarter_turns) % 4)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[1, 0], [0, _QUARTER[self.quarter_turns]]], dtype=complex)

    def __matmul__(self, other: "PhaseGate") -> "PhaseGate":
        return PhaseGate(self.quarter_turns + other.quarter_turns)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhaseGate):
            return NotImplemented
        return self.quarter_turns == other.quarter_turns

    def __hash__(self) -> int:
        return hash(self.quarter_turns)

    def is_identity(self) -> bool:
        return self.quarter_turns == 0

    def unitarity_defect(self) -> float:
        u = self.matrix
        return float(np.max(np.abs(u @ u.conj().T - np.eye(2))))

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(vec, dtype=complex)


def phase_gate(m: int) -> PhaseGate:
    """Parallel transport diag(1, e^{i pi m / 2}) for a net translation tau -> tau + m."""
    return PhaseGate(int(m))


def heat_holonomy(m: int) -> PhaseGate:
    """Holonomy of the heat connection for a loop whose net tau-translation is m."""
    return PhaseGate(int(m), origin="heat_holonomy")


def verify_gate_against_theta(m: int, z: complex, tau: TauLike) -> float:
    """Relative mismatch between theta(z, tau + m) and phase_gate(m) theta(z, tau)."""
    if abs(int(m)) > 8:
        raise RangeError("|m| must not exceed 8")
    tau = as_tau(tau)
    before = theta_vector2(z, tau).as_array()
    after = theta_vector2(z, tau.translate(int(m))).as_array()
    predicted = phase_gate(m).apply(before)
    return float(np.max(np.abs(after - predicted)) / np.linalg.norm(before))
