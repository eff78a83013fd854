"""Frequency ranges by caustic type and bifurcation-curve tracing."""

import numpy as np
import pytest

from confocal.bifurcation import (
    MINIMAL_FREQUENCIES,
    anchors,
    criteria_fast,
    g_star_4_closed,
    in_range,
    minimal_regions,
    range_boundary,
    trace_g,
)
from confocal.errors import EmptySlice
from confocal.frequency import rotation_number_2d, varrho

AXES = (1.0, 0.58, 0.46)


def test_anchor_closed_forms():
    a, b, c = AXES
    an = anchors(a, b, c)
    assert np.sin(np.pi * an.rho_x) ** 2 == pytest.approx(c / b, abs=1e-14)
    assert np.sin(np.pi * an.rho_y) ** 2 == pytest.approx(c / a, abs=1e-14)
    assert np.sin(np.pi * an.rho_z) ** 2 == pytest.approx(b / a, abs=1e-14)
    assert an.rho_star == pytest.approx(rotation_number_2d(c, b, a), abs=1e-14)
    assert an.B1 == (0.5, an.rho_star)
    assert an.D == (an.rho_x, an.rho_y)
    with pytest.raises(ValueError):
        anchors(0.5, 0.58, 0.46)


def test_h1h1_range_is_exact_triangle():
    a, b, c = AXES
    an = anchors(a, b, c)
    rs = an.rho_star
    mid = (0.5 * (0.5 + rs), 0.5 * (rs + 0.25 + 0.25 * rs))
    assert in_range(mid, (1, 0), a, b, c) == "inside"
    assert in_range((0.4, 0.3), (1, 0), a, b, c) == (
        "inside" if 0.3 > rs else "outside")
    # just below the horizontal edge omega_2 = rho_star
    assert in_range((0.45, rs - 1e-3), (1, 0), a, b, c) == "outside"
    assert in_range((0.45, rs + 1e-9), (1, 0), a, b, c, band_tol=1e-6) \
        == "boundary-band"


def test_graph_and_winding_methods_agree():
    a, b, c = AXES
    rng = np.random.default_rng(11)
    checked = 0
    for _ in range(12):
        w = (rng.uniform(0.05, 0.5), rng.uniform(0.02, 0.45))
        if w[1] >= w[0]:
            continue
        for sigma in ((0, 0), (0, 1), (1, 1)):
            g = in_range(w, sigma, a, b, c, method="graph")
            v = in_range(w, sigma, a, b, c, method="winding")
            if "boundary-band" in (g, v):
                continue
            assert g == v, (w, sigma)
            checked += 1
    assert checked >= 20


def test_criteria_fast_consistent_with_ranges():
    a, b, c = AXES
    rng = np.random.default_rng(5)
    for _ in range(8):
        w = sorted((rng.uniform(0.02, 0.5), rng.uniform(0.02, 0.5)))
        w = (w[1], w[0])
        if w[1] >= w[0] - 0.01:
            continue
        verdicts = criteria_fast(w, a, b, c)
        for name, v in verdicts.items():
            assert not (v.sufficient and v.excluded)
            sigma = {"EH1": (0, 0), "H1H1": (1, 0),
                     "EH2": (0, 1), "H1H2": (1, 1)}[name]
            r = in_range(w, sigma, a, b, c)
            if v.sufficient:
                assert r == "inside", (name, w)
            if v.excluded:
                assert r == "outside", (name, w)


def test_boundary_polygon_closes_and_area_positive():
    a, b, c = AXES
    for sigma in ((0, 0), (1, 0), (0, 1), (1, 1)):
        rb = range_boundary(a, b, c, sigma)
        assert np.allclose(rb.points[0], rb.points[-1], atol=1e-9)
        assert 0.0 < rb.area() < 0.125


def test_trace_g2_matches_closed_form():
    # bifurcation value of the two-caustic-parameter family with a
    # quarter frequency: g = b / (1 + b)
    rows = trace_g((1, 0), (0.375, 0.25), [0.3, 0.6])
    for b, g in rows:
        assert g == pytest.approx(b / (1.0 + b), abs=1e-8)


def test_trace_g4_matches_closed_form():
    name, omega0 = MINIMAL_FREQUENCIES[4]
    assert name == "H1H2"
    rows = trace_g((1, 1), omega0, [0.36, 0.45])
    for b, g in rows:
        assert g == pytest.approx(g_star_4_closed(b), abs=1e-6)


def test_trace_g_empty_slice():
    with pytest.raises(EmptySlice):
        trace_g((0, 1), MINIMAL_FREQUENCIES[3][1], [0.55])


def test_minimal_region_identity_branch():
    # below the golden-ratio threshold the whole slice admits the
    # 5-periodic orbits, so the traced border degenerates to g = b
    r = (3.0 - np.sqrt(5.0)) / 2.0
    rows = minimal_regions(3, [0.25 * r, 0.8 * r])
    assert np.allclose(rows[:, 1], rows[:, 0], atol=1e-12)


def test_g_star_4_closed_domain():
    assert g_star_4_closed(1.0 / 3.0) == pytest.approx(0.25, abs=1e-15)
    with pytest.raises(ValueError):
        g_star_4_closed(0.6)
