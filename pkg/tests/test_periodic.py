"""Periodic orbits: lower bounds, closure test, inversion, refinement."""

import numpy as np
import pytest

from confocal.errors import NotClosed
from confocal.frequency import frequency
from confocal.geometry import Ellipsoid, billiard_orbit, caustics_of_line
from confocal.periodic import (
    E_sigma,
    cayley_test,
    closure_symmetry,
    invert_frequency,
    kappa_sigma,
    kappa_table,
    minimal_caustics_2d,
    refine_periodic,
    sharpen_resonant_caustic,
    state_with_caustics,
    winding_from_orbit,
)

A, B = 1.0, 4.0 / 9.0
E2 = Ellipsoid((B, A))


def test_forced_even_index_sets():
    assert E_sigma((0, 0)) == frozenset({1, 2})
    assert E_sigma((1, 0)) == frozenset({0, 2})
    assert E_sigma((0, 1)) == frozenset({1, 2})
    assert E_sigma((1, 1)) == frozenset({0, 1, 2})


def test_kappa_table_n2():
    table = kappa_table(2)
    assert table[(0, 0)] == 5
    assert table[(1, 0)] == 4
    assert table[(0, 1)] == 5
    assert table[(1, 1)] == 6


def test_kappa_identities_small_n():
    for n in range(1, 9):
        table = kappa_table(n)
        assert kappa_sigma((1,) * n) == 2 * n + 2
        assert min(table.values()) == n + 2
        mean = sum(table.values()) / len(table)
        assert mean == pytest.approx(1.5 * n + 2, abs=1e-12)


def test_minimal_caustics_2d_closed_forms():
    lam_e, lam_h = minimal_caustics_2d(A, B)
    assert lam_h == pytest.approx(A * B / (A - B), abs=1e-15)
    assert lam_e == pytest.approx(
        3 * A * B / (A + B + 2 * np.sqrt(A * A - A * B + B * B)), abs=1e-15)
    assert minimal_caustics_2d(1.0, 0.6)[1] is None
    with pytest.raises(ValueError):
        minimal_caustics_2d(1.0, 1.2)


def test_cayley_dips_at_minimal_periods():
    lam_e, lam_h = minimal_caustics_2d(A, B)
    # triangular orbits close after 3 bounces; 4-periodic ones after 2
    # bounces up to central symmetry
    assert cayley_test(E2, (lam_e,), 3).residual < 1e-12
    assert cayley_test(E2, (lam_e,), 2).residual > 1e-6
    assert cayley_test(E2, (lam_h,), 2).residual < 1e-12
    # generic parameters pass no closure test
    for lam in (0.15, 0.37, 0.77):
        for m in (2, 3, 4, 5):
            assert cayley_test(E2, (lam,), m).residual > 1e-6


def test_sharpen_resonant_caustic():
    lam_e, _ = minimal_caustics_2d(A, B)
    out = sharpen_resonant_caustic(E2, (lam_e + 1e-7,), 3)
    assert out.lam[0] == pytest.approx(lam_e, abs=1e-12)


def test_state_with_caustics_reproduces_parameters():
    x = state_with_caustics(E2, (0.3,))
    assert caustics_of_line(E2, x.q, x.p).lam[0] == pytest.approx(0.3, abs=1e-9)
    e3 = Ellipsoid((0.2, 0.5, 1.0))
    x = state_with_caustics(e3, (0.1, 0.35))
    lam = caustics_of_line(e3, x.q, x.p).lam
    assert np.allclose(lam, (0.1, 0.35), atol=1e-7)


def test_closure_symmetry_identity_and_not_closed():
    lam_e, _ = minimal_caustics_2d(A, B)
    x = state_with_caustics(E2, (lam_e,))
    x = refine_periodic(E2, x, 3)
    orbit = billiard_orbit(E2, x, 3)
    g, err = closure_symmetry(E2, orbit)
    assert np.all(g > 0)
    assert err < 1e-10
    with pytest.raises(NotClosed):
        closure_symmetry(E2, billiard_orbit(E2, x, 4), tol=1e-6)


def test_refine_periodic_rejects_far_orbits():
    x = state_with_caustics(E2, (0.2,))
    with pytest.raises(NotClosed):
        refine_periodic(E2, x, 5)


def test_winding_numbers_planar_minimal_orbits():
    lam_e, lam_h = minimal_caustics_2d(A, B)
    x = refine_periodic(E2, state_with_caustics(E2, (lam_e,)), 3)
    w = winding_from_orbit(E2, billiard_orbit(E2, x, 3))
    assert w.m == (3, 2)
    assert w.omega() == pytest.approx((1.0 / 3.0,), abs=1e-15)
    # the 4-periodic orbit closes after 2 bounces up to central symmetry,
    # and the counts are taken over the doubled orbit
    x = refine_periodic(E2, state_with_caustics(E2, (lam_h,)), 2)
    w = winding_from_orbit(E2, billiard_orbit(E2, x, 2))
    assert w.m == (4, 2)
    assert w.sigma == (1,)


def test_invert_frequency_roundtrip():
    e3 = Ellipsoid((0.2, 0.5, 1.0))
    lam0 = (0.08, 0.33)
    omega0 = frequency(e3, lam0).omega
    sigma = caustics_of_line(e3, *_chord(e3, lam0)).sigma
    found = invert_frequency(e3, sigma, omega0)
    assert np.allclose(found.lam, lam0, atol=1e-7)


def _chord(e, lam):
    x = state_with_caustics(e, lam)
    return x.q, x.p
