"""Billiard map, caustics of a line, and planar phase coordinates."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from confocal.errors import OutsideAnnulus
from confocal.geometry import (
    Ellipsoid,
    PhasePoint,
    billiard_orbit,
    billiard_step,
    caustic_tangency,
    caustics_of_line,
    lambda_of_phase,
    phase_to_state,
    separatrix_r,
    sigma_of_lambda,
    state_to_phase,
)

E2 = Ellipsoid((4.0 / 9.0, 1.0))
E3 = Ellipsoid((0.46, 0.58, 1.0))


def test_semiaxes_sorted_and_validated():
    with pytest.raises(ValueError):
        Ellipsoid((1.0, 1.0))
    with pytest.raises(ValueError):
        Ellipsoid((-1.0, 2.0))
    assert Ellipsoid((0.3, 0.7)).n == 1


def test_project_and_normal_outward(rng):
    for _ in range(20):
        q = E3.project(rng.normal(size=3))
        assert abs(E3.residual(q)) < 1e-12
        assert np.dot(q, E3.unit_normal(q)) > 0.0


def test_reflection_preserves_incidence_angle(rng):
    for _ in range(20):
        q = E3.project(rng.normal(size=3))
        n = E3.unit_normal(q)
        p = rng.normal(size=3)
        p /= np.linalg.norm(p)
        if np.dot(p, n) < 0.05:
            continue
        x = billiard_step(E3, PhasePoint(q, p))
        # the outgoing segment hits the next point; angle with the normal
        # is preserved by the reflection at q
        v_out = x.q - q
        v_out /= np.linalg.norm(v_out)
        assert abs(abs(np.dot(p, n)) - abs(np.dot(v_out, n))) < 1e-9


@given(st.floats(0.05, 6.2), st.floats(-0.6, 0.6))
def test_caustic_is_conserved_planar(phi, r):
    if r * r >= 4.0 / 9.0:
        return
    x = phase_to_state(E2, phi, r)
    lam0 = caustics_of_line(E2, x.q, x.p).lam[0]
    orbit = billiard_orbit(E2, x, 50)
    for pt in orbit[::7]:
        lam = caustics_of_line(E2, pt.q, pt.p).lam[0]
        assert abs(lam - lam0) < 1e-9


def test_phase_state_roundtrip(rng):
    for _ in range(20):
        phi = rng.uniform(0.0, 2 * np.pi)
        r = rng.uniform(-0.6, 0.6)
        x = phase_to_state(E2, phi, r)
        bc = state_to_phase(E2, x)
        assert abs((bc.phi - phi + np.pi) % (2 * np.pi) - np.pi) < 1e-10
        assert abs(bc.r - r) < 1e-10


def test_lambda_of_phase_closed_form():
    # caustic parameter of a planar state has the closed form
    # (a-b) sin^2 phi + b - r^2; cross-check against the line caustic
    for phi, r in [(0.4, 0.1), (1.2, -0.3), (2.5, 0.5)]:
        x = phase_to_state(E2, phi, r)
        lam_line = caustics_of_line(E2, x.q, x.p).lam[0]
        assert abs(lambda_of_phase(E2, phi, r) - lam_line) < 1e-10


def test_lambda_of_phase_outside_annulus():
    with pytest.raises(OutsideAnnulus):
        lambda_of_phase(E2, 0.0, 0.7)


def test_separatrix_endpoints():
    assert separatrix_r(E2, 0.0) == 0.0
    assert abs(separatrix_r(E2, np.pi)) < 1e-12
    a, b = 1.0, 4.0 / 9.0
    assert abs(separatrix_r(E2, np.pi / 2) - np.sqrt(a - b)) < 1e-12


def test_major_axis_orbit_is_two_periodic():
    x = phase_to_state(E2, 0.0, 0.0)
    orbit = billiard_orbit(E2, x, 6)
    pts = np.array([pt.q for pt in orbit])
    assert np.allclose(pts[0], pts[2], atol=1e-9)
    assert np.allclose(pts[1], pts[3], atol=1e-9)
    assert not np.allclose(pts[0], pts[1], atol=1e-3)


def test_caustics_of_line_interlacing(rng):
    for _ in range(20):
        q = E3.project(rng.normal(size=3))
        p = rng.normal(size=3)
        p /= np.linalg.norm(p)
        cp = caustics_of_line(E3, q, p)
        lam = cp.lam
        assert len(lam) == 2
        assert 0.0 < lam[0] < lam[1] < 1.0
        sigma = sigma_of_lambda(E3, lam)
        assert all(s in (0, 1) for s in sigma)
        # each caustic is tangent to the line: discriminant vanishes
        for lv in lam:
            _, disc = caustic_tangency(E3, q, p, lv)
            assert abs(disc) < 1e-8


def test_orbit_length_and_points_on_surface():
    q = E3.project(np.array([0.3, 0.4, 0.5]))
    p = np.array([0.2, -0.5, 0.6])
    x = PhasePoint(q, p / np.linalg.norm(p))
    orbit = billiard_orbit(E3, x, 25)
    assert len(orbit) == 26
    for pt in orbit:
        assert abs(E3.residual(pt.q)) < 1e-10
