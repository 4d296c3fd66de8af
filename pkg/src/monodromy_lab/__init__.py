"""Theta functions, Weierstrass curves, braids and Hamiltonian monodromy."""

from __future__ import annotations

from .errors import *  # noqa: F401,F403
from .monodromy import B1, B2, IDENTITY, S, Z0, PhaseGate, UnimodularMatrix, heat_holonomy, phase_gate
from .pendulum import PendulumPoint, certify, rotation_and_period, trace_circuit
from .thetafn import ModularParameter, level_theta, theta, theta1, theta2, theta3, theta4

__version__ = "0.1.0"

__all__ = [
    "B1",
    "B2",
    "IDENTITY",
    "S",
    "Z0",
    "ModularParameter",
    "PendulumPoint",
    "PhaseGate",
    "UnimodularMatrix",
    "certify",
    "heat_holonomy",
    "level_theta",
    "phase_gate",
    "rotation_and_period",
    "theta",
    "theta1",
    "theta2",
    "theta3",
    "theta4",
    "trace_circuit",
]
