from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from monodromy_lab.errors import DegenerateCurveError, DomainError, PoleOnPathError, RootOrderError, UnsupportedCurveError
from monodromy_lab.oracles import quad_complete
from monodromy_lab.thetafn import theta2, theta3, theta4
from monodromy_lab.weierstrass import (
    CubicPoly,
    CurveData,
    curve_from_invariants,
    cycle_integral,
    elliptic_first,
    elliptic_third,
    invariants_from_roots,
    jacobi_modulus,
    periods,
    roots_from_invariants,
    roots_from_theta_constants,
    theta_root_residuals,
)

LEMNISCATE_OMEGA = 1.31102877714606


def omega_by_quadrature(e1, e2, e3):
    # x = e1 + s^2 turns the endpoint singularity into a smooth integrand
    f = lambda s: 2.0 / math.sqrt(4.0 * (s * s + e1 - e2) * (s * s + e1 - e3))
    return quad(f, 0, np.inf, epsabs=0, epsrel=1e-13, limit=500)[0]


@st.composite
def real_root_triples(draw):
    a = draw(st.floats(0.05, 5.0))
    b = draw(st.floats(0.05, 5.0))
    e3 = -(2 * a + b) / 3
    return (e3 + a + b, e3 + a, e3)


class TestCubicPoly:
    def test_zero_leading(self):
        with pytest.raises(DomainError):
            CubicPoly(0, 1, 2, 3)

    def test_non_finite(self):
        with pytest.raises(DomainError):
            CubicPoly(1, float("inf"), 0, 0)

    def test_real_roots_ascending(self):
        assert CubicPoly(1, 0, -1, 0).roots() == pytest.approx((-1, 0, 1), abs=1e-15)

    def test_complex_coefficients(self):
        p = CubicPoly(1, 0, -3, 2 + 0.5j)
        assert not p.is_real
        for r in p.roots():
            assert abs(p(r)) < 1e-13


class TestRoots:
    def test_lemniscatic(self):
        assert roots_from_invariants(4, 0) == pytest.approx((1, 0, -1), abs=1e-15)

    def test_cube_roots_of_unity(self):
        w = cmath.exp(2j * math.pi / 3)
        r = roots_from_invariants(0, 4)
        assert r == pytest.approx((1, w, w.conjugate()), abs=1e-14)
        assert r[1].imag > 0 > r[2].imag

    @given(real_root_triples())
    def test_sum_zero_and_ordered(self, roots):
        g2, g3 = invariants_from_roots(roots)
        e = roots_from_invariants(g2, g3)
        assert abs(sum(e)) < 1e-12 * max(map(abs, e))
        assert e[0] > e[1] > e[2]

    @given(real_root_triples())
    def test_invariant_round_trip(self, roots):
        g2, g3 = invariants_from_roots(roots)
        h2, h3 = invariants_from_roots(roots_from_invariants(g2, g3))
        scale = max(abs(g2), abs(g3))
        assert abs(h2 - g2) < 1e-12 * scale and abs(h3 - g3) < 1e-12 * scale

    def test_degenerate(self):
        with pytest.raises(DegenerateCurveError):
            roots_from_invariants(3, 1)  # 27 = 27


class TestModulus:
    def test_lemniscatic(self):
        k2, kp2 = jacobi_modulus((1, 0, -1))
        assert k2 == 0.5 and k2 + kp2 == 1

    @given(real_root_triples())
    def test_complement_exact(self, roots):
        k2, kp2 = jacobi_modulus(roots)
        assert k2 + kp2 == 1

    def test_degenerate(self):
        with pytest.raises(DegenerateCurveError):
            jacobi_modulus((1, 0, 1))

    @pytest.mark.parametrize("g2, g3", [(4, 0), (4, 1), (7, -2)])
    def test_theta_quotient(self, g2, g3):
        c = curve_from_invariants(g2, g3)
        ratio = theta2(0, c.tau) ** 4 / theta3(0, c.tau) ** 4
        assert abs(c.k_sq - ratio) < 1e-10


class TestPeriods:
    def test_lemniscatic(self):
        omega, omega_p, tau = periods(4, 0)
        assert abs(omega_by_quadrature(1, 0, -1) - LEMNISCATE_OMEGA) < 1e-13
        assert abs(omega - LEMNISCATE_OMEGA) < 1e-13
        assert abs(omega_p - 1j * LEMNISCATE_OMEGA) < 1e-13
        assert abs(tau - 1j) < 1e-14

    @given(real_root_triples())
    def test_upper_half_plane_and_quadrature(self, roots):
        g2, g3 = invariants_from_roots(roots)
        omega, _, tau = periods(g2, g3)
        assert tau.imag > 0
        assert abs(omega - omega_by_quadrature(*roots_from_invariants(g2, g3))) < 1e-10 * omega

    def test_complex_roots_unsupported(self):
        with pytest.raises(UnsupportedCurveError):
            periods(0, 4)

    @pytest.mark.parametrize("g2, g3", [(4, 0), (4, 1), (10, 3)])
    def test_closed_cycle_is_twice_omega(self, g2, g3):
        c = curve_from_invariants(g2, g3)
        # counterclockwise around [e3, e2]
        assert abs(abs(cycle_integral(c.roots, (1, 2))) - 2 * c.omega) < 1e-12 * c.omega
        assert abs(cycle_integral(c.roots, (1, 2)) + 2 * c.omega) < 1e-12 * c.omega

    def test_cycle_around_e1_e2_is_imaginary_period(self):
        c = curve_from_invariants(4, 1)
        val = cycle_integral(c.roots, (0, 1))
        assert abs(abs(val) - 2 * abs(c.omega_prime)) < 1e-12 * abs(c.omega_prime)

    def test_curve_data_checks(self):
        c = curve_from_invariants(4, 0)
        with pytest.raises(DomainError):
            CurveData(4, 0, (1, 0, -0.9), c.omega, c.omega_prime, c.tau, c.k_sq)
        with pytest.raises(DomainError):
            CurveData(4, 1, c.roots, c.omega, c.omega_prime, c.tau, c.k_sq)


class TestBridge:
    def test_lemniscatic(self):
        assert max(theta_root_residuals(curve_from_invariants(4, 0))) < 1e-10

    def test_second_curve(self):
        c = curve_from_invariants(4, 1)
        assert c.roots == pytest.approx((1.10716, -0.26959, -0.83757), abs=1e-5)
        assert max(theta_root_residuals(c)) < 1e-9

    def test_redundancy(self):
        # (e2 - e3) + (e1 - e2) = e1 - e3 = (pi/2w)^2 theta3^4 by the Jacobi identity
        c = curve_from_invariants(4, 1)
        s = (math.pi / (2 * c.omega)) ** 2
        lhs = s * theta2(0, c.tau) ** 4 + s * theta4(0, c.tau) ** 4
        rhs = s * theta3(0, c.tau) ** 4
        assert abs(lhs - rhs) < 1e-10 * abs(rhs)
        assert abs(rhs - (c.roots[0] - c.roots[2])) < 1e-10

    @given(real_root_triples())
    def test_family(self, roots):
        g2, g3 = invariants_from_roots(roots)
        c = curve_from_invariants(g2, g3)
        assert max(theta_root_residuals(c)) < 1e-9

    @given(real_root_triples())
    def test_swap_under_translation(self, roots):
        g2, g3 = invariants_from_roots(roots)
        c = curve_from_invariants(g2, g3)
        e1, e2, e3 = c.roots
        swapped = roots_from_theta_constants(c.omega, c.tau.value + 1)
        scale = max(map(abs, c.roots))
        assert max(abs(a - b) for a, b in zip(swapped, (e1, e3, e2))) < 1e-9 * scale


class TestEllipticIntegrals:
    def test_first_kind_lemniscatic(self):
        # -(4x^3 - 4x) is positive on (0, 1)
        poly = CubicPoly(-4, 0, 4, 0)
        assert abs(elliptic_first((0, 1), poly) - LEMNISCATE_OMEGA) < 1e-13
        assert abs(quad_complete(0, 1, -1, -4) - LEMNISCATE_OMEGA) < 1e-12

    def test_sign_convention_requires_positive_poly(self):
        with pytest.raises(RootOrderError):
            elliptic_first((0, 1), CubicPoly(4, 0, -4, 0))

    def test_not_consecutive(self):
        with pytest.raises(RootOrderError):
            elliptic_first((-1, 1), CubicPoly(-4, 0, 4, 0))
        with pytest.raises(RootOrderError):
            elliptic_first((0, 0.5), CubicPoly(-4, 0, 4, 0))

    @pytest.mark.parametrize("limits, coeffs", [((-1, 0), (4, 0, -4, 0)), ((0, 1), (-4, 0, 4, 0)), ((-0.5, 2), (1, -4.5, 3.5, 3))])
    def test_first_against_quadrature(self, limits, coeffs):
        poly = CubicPoly(*coeffs)
        a, b = limits
        r = [x for x in poly.roots() if abs(x - a) > 1e-9 and abs(x - b) > 1e-9][0]
        assert abs(elliptic_first(limits, poly) / quad_complete(a, b, r, poly.c3) - 1) < 1e-10

    @pytest.mark.parametrize("c", [-3.0, -1.2, 1.01, 1.5, 40.0])
    def test_third_against_quadrature(self, c):
        poly = CubicPoly(-4, 0, 4, 0)
        ref = quad_complete(0, 1, -1, -4, weight=lambda x: 1 / (x - c))
        assert abs(elliptic_third((0, 1), poly, c) / ref - 1) < 1e-10

    def test_third_on_left_interval(self):
        poly = CubicPoly(4, 0, -4, 0)
        ref = quad_complete(-1, 0, 1, 4, weight=lambda x: 1 / (x - 0.5))
        assert abs(elliptic_third((-1, 0), poly, 0.5) / ref - 1) < 1e-10

    def test_large_pole_limit(self, capsys):
        poly = CubicPoly(-4, 0, 4, 0)
        first = elliptic_first((0, 1), poly)
        for c in (1e8, -1e8):
            ratio = c * elliptic_third((0, 1), poly, c) / first
            print(f"c={c:.0e}: c*I3/I1 = {ratio:.12f}")
            # 1/(x - c) -> -1/c, so it is -c * I3 that tends to I1
            assert abs(-ratio - 1) < 1e-6

    @pytest.mark.parametrize("c", [0.0, 0.5, 1.0])
    def test_pole_on_path(self, c):
        with pytest.raises(PoleOnPathError):
            elliptic_third((0, 1), CubicPoly(-4, 0, 4, 0), c)
