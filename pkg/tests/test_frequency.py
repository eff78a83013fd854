"""Frequency map: planar rotation numbers, extension, and Jacobian."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confocal.frequency import (
    extended_frequency,
    frequency,
    jacobian,
    kappa_S_2d,
    lambda_pm,
    normalized_jacobian,
    nu_x,
    nu_y,
    nu_z,
    rho_x,
    rho_y,
    rho_z,
    rotation_number_2d,
    rotation_number_ext,
    varrho,
)
from confocal.geometry import Ellipsoid

A, B = 1.0, 4.0 / 9.0
E3 = Ellipsoid((0.46, 0.58, 1.0))


def test_planar_frequency_equals_rotation_number():
    e = Ellipsoid((B, A))
    for lam in (0.1, 0.3, 0.6, 0.9):
        f = frequency(e, (lam,))
        assert f.omega[0] == pytest.approx(
            rotation_number_2d(lam, B, A), abs=1e-12)


def test_varrho_closed_form():
    for beta, alpha in [(0.3, 1.0), (0.5, 1.0), (0.44, 0.58)]:
        v = varrho(beta, alpha)
        assert np.sin(np.pi * v) ** 2 == pytest.approx(beta / alpha, abs=1e-14)


@given(st.floats(0.05, 0.42))
@settings(max_examples=15)
def test_rotation_number_symmetry(lam):
    # the rotation number is symmetric under swapping the caustic
    # parameter with the smaller semiaxis
    r1 = rotation_number_2d(lam, B, A)
    r2 = rotation_number_2d(B, lam, A)
    assert r1 == pytest.approx(r2, abs=1e-11)


def test_rotation_number_monotone_limits():
    assert rotation_number_ext(0.0, B, A) == 0.0
    assert rotation_number_ext(B, B, A) == 0.5
    assert rotation_number_ext(A, B, A) == pytest.approx(varrho(B, A), abs=1e-13)
    rs = [rotation_number_ext(lam, B, A) for lam in np.linspace(0.01, B - 0.01, 12)]
    assert all(x < y for x, y in zip(rs, rs[1:]))


def test_lambda_pm_roundtrip():
    res = lambda_pm(0.45, B, A)
    assert rotation_number_2d(res.lam_minus, B, A) == pytest.approx(0.45, abs=1e-10)
    assert rotation_number_2d(res.lam_plus, B, A) == pytest.approx(0.45, abs=1e-10)
    # the hyperbolic branch only exists above the flat-limit value
    low = lambda_pm(0.2, B, A)
    assert low.lam_plus is None


def test_kappa_S_closed_form():
    assert np.cosh(kappa_S_2d(B, A)) ** 2 == pytest.approx(A / B, abs=1e-13)


def test_homogeneity_degree_zero():
    lam = (0.2, 0.5)
    w1 = frequency(E3, lam).omega
    for t in (0.37, 2.0, 11.0):
        e_t = Ellipsoid(tuple(t * v for v in E3.semiaxes))
        w2 = frequency(e_t, tuple(t * v for v in lam)).omega
        assert np.allclose(w1, w2, atol=1e-12)


def test_frequency_ordering():
    rng = np.random.default_rng(3)
    c, b, a = E3.semiaxes
    for _ in range(15):
        l1 = rng.uniform(0.02, c - 0.02)
        l2 = rng.uniform(c + 0.02, b - 0.02)
        w = frequency(E3, (l1, l2)).omega
        assert 0.0 < w[1] < w[0] < 0.5


def test_extended_matches_interior_near_edges():
    c, b, a = E3.semiaxes
    # approaching the plane lambda_2 = a the interior values converge to
    # the closed edge formula
    l1 = 0.2
    edge = extended_frequency(E3, (l1, a)).omega
    near = frequency(E3, (l1, a - 1e-7)).omega
    assert abs(near[0] - edge[0]) < 1e-3
    assert abs(near[1] - edge[1]) < 1e-3


def test_edge_formula_values_consistent():
    c, b, a = E3.semiaxes
    f = extended_frequency(E3, (c, 0.8))
    assert f.omega[0] == pytest.approx(0.5, abs=1e-13)
    f = extended_frequency(E3, (0.2, b))
    assert f.omega[0] == pytest.approx(f.omega[1], abs=1e-13)
    f = extended_frequency(E3, (0.0, 0.5))
    assert f.omega == (0.0, 0.0)


def test_jacobian_nondegenerate_interior():
    J = jacobian(E3, (0.2, 0.5))
    assert abs(np.linalg.det(J)) > 1e-3
    score = normalized_jacobian(E3, (0.2, 0.5))
    assert 0.0 < score < 1.0


def test_nu_limits():
    c, b, a = E3.semiaxes
    assert nu_x(1e-9, c, b, a) == pytest.approx(0.0, abs=1e-4)
    assert nu_z(c - 1e-10, c, b, a) == pytest.approx(0.5, abs=2e-2)
    assert nu_y(b + 1e-10, c, b, a) == pytest.approx(
        rotation_number_2d(c, b, a), abs=1e-4)
