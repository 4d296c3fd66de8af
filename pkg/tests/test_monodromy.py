from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from monodromy_lab.errors import DomainError, RangeError
from monodromy_lab.monodromy import (
    B1,
    B2,
    IDENTITY,
    S,
    Z0,
    PhaseGate,
    UnimodularMatrix,
    heat_holonomy,
    moebius_act,
    phase_gate,
    quantum_dual,
    verify_gate_against_theta,
)

gens = st.sampled_from([B1, B2, S, B1.inverse(), B2.inverse(), S.inverse()])
matrices = st.lists(gens, min_size=0, max_size=10).map(lambda ms: _product(ms))
taus = st.builds(complex, st.floats(-2, 2), st.floats(0.2, 3))


def _product(ms):
    out = IDENTITY
    for m in ms:
        out = out @ m
    return out


class TestUnimodular:
    def test_determinant_checked(self):
        with pytest.raises(DomainError):
            UnimodularMatrix(1, 1, 1, 1)

    def test_integer_entries(self):
        with pytest.raises(DomainError):
            UnimodularMatrix(1, 0.5, 0, 1)

    def test_powers(self):
        assert B2**5 == UnimodularMatrix(1, 5, 0, 1)
        assert B2**-3 == UnimodularMatrix(1, -3, 0, 1)
        assert B1**0 == IDENTITY

    def test_braid_relation(self):
        assert B1 @ B2 @ B1 == B2 @ B1 @ B2

    def test_s_order_four(self):
        assert S**4 == IDENTITY and S**2 != IDENTITY

    @given(matrices)
    def test_inverse(self, m):
        assert m @ m.inverse() == IDENTITY and m.det() == 1

    def test_rows_round_trip(self):
        m = UnimodularMatrix(2, 3, 1, 2)
        assert UnimodularMatrix.from_rows(m.rows()) == m


class TestMoebius:
    def test_translation(self):
        assert moebius_act(Z0, 0.3 + 1.2j).value == pytest.approx(1.3 + 1.2j)

    def test_identity(self):
        assert moebius_act(IDENTITY, 0.3 + 1.2j).value == 0.3 + 1.2j

    def test_inversion_fixes_i(self):
        assert abs(moebius_act(S, 1j).value - 1j) < 1e-15

    @given(matrices, matrices, taus)
    def test_left_action(self, a, b, tau):
        lhs = moebius_act(a, moebius_act(b, tau)).value
        rhs = moebius_act(a @ b, tau).value
        assert abs(lhs - rhs) < 1e-14 * max(1.0, abs(rhs)) * max(1, max(map(abs, (a @ b).rows()[0] + (a @ b).rows()[1]))) ** 2

    @given(matrices, taus)
    def test_stays_in_upper_half_plane(self, m, tau):
        assert moebius_act(m, tau).imag > 0


class TestQuantumDual:
    def test_b2_to_b1(self):
        assert quantum_dual(B2) == B1
        assert quantum_dual(B1) == B2

    def test_identity(self):
        assert quantum_dual(IDENTITY) == IDENTITY

    @given(matrices)
    def test_involution(self, m):
        assert quantum_dual(quantum_dual(m)) == m

    @given(matrices, matrices)
    def test_multiplicative(self, a, b):
        assert quantum_dual(a @ b) == quantum_dual(a) @ quantum_dual(b)


class TestPhaseGate:
    def test_m_one(self):
        np.testing.assert_array_equal(phase_gate(1).matrix, np.diag([1, 1j]))

    @pytest.mark.parametrize("m", [0, 4, -4, 8])
    def test_trivial(self, m):
        assert phase_gate(m).is_identity()
        np.testing.assert_array_equal(phase_gate(m).matrix, np.eye(2))

    @given(st.integers(-50, 50), st.integers(-50, 50))
    def test_homomorphism(self, a, b):
        assert phase_gate(a + b) == phase_gate(a) @ phase_gate(b)

    @given(st.integers(-50, 50))
    def test_unitary(self, m):
        assert phase_gate(m).unitarity_defect() < 1e-14

    def test_image_is_z4(self):
        assert {phase_gate(m) for m in range(-20, 20)} == {PhaseGate(q) for q in range(4)}

    def test_heat_holonomy(self):
        np.testing.assert_array_equal(heat_holonomy(1).matrix, np.diag([1, 1j]))
        np.testing.assert_array_equal(heat_holonomy(-1).matrix, np.diag([1, -1j]))
        np.testing.assert_array_equal(heat_holonomy(2).matrix, np.diag([1, -1]))
        assert heat_holonomy(1).origin == "heat_holonomy"
        assert heat_holonomy(1) == phase_gate(1)

    def test_apply(self):
        np.testing.assert_array_equal(phase_gate(1).apply([2, 3]), [2, 3j])


class TestGateAgainstTheta:
    def test_examples(self):
        assert verify_gate_against_theta(1, 0.1, 1j) < 1e-12
        assert verify_gate_against_theta(0, 0.3 - 0.2j, 0.1 + 0.7j) < 1e-15
        assert verify_gate_against_theta(3, 0.2 + 0.1j, 1.5j) < 1e-11

    @given(st.integers(-8, 8), st.builds(complex, st.floats(-0.5, 0.5), st.floats(-0.3, 0.3)), taus)
    def test_random(self, m, z, tau):
        assert verify_gate_against_theta(m, z, tau) < 1e-11

    def test_range(self):
        with pytest.raises(RangeError):
            verify_gate_against_theta(9, 0.1, 1j)
