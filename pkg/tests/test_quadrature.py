"""Singular quadrature engine against independently computed oracles.

The frozen reference values below were produced with 40-digit mpmath
tanh-sinh quadrature of the raw integrands (no endpoint substitution),
an implementation independent of the Gauss-Legendre engine under test.
"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from confocal.errors import CollapsedInterval, PoleTooClose
from confocal.geometry import Ellipsoid
from confocal.quadrature import (
    CollapseConfig,
    collapse_config,
    hyperelliptic_K,
    integral_table,
    singular_integral,
    weighted_K,
)

ROOTS3 = (0.2, 0.5, 1.0)
ROOTS5 = (0.1, 0.3, 0.45, 0.7, 1.0)

# mpmath 40-digit oracles
I0 = 3.936751542188122226674100636113786112  # (0.2,0.5), i=0
I1 = 1.412456607873411806170575047871841620  # (0.2,0.5), i=1
J0 = 1.608475514268873008926804871367384223  # (0.0,0.2), i=0
P0 = 10.86290605365364196584731659981839437  # pole 0.75 on (0.2,0.5)
G1 = 5.097895207887780369527415913681787494  # genus 2, (0.3,0.45), i=1
K01 = 4.421903247428884162086203938759796974  # (0.5,1.0), i=0
W0 = 2.658036760286238106965425639690740877  # pole 0.75 on (0.0,0.2)


def test_two_root_interval_oracle():
    assert singular_integral(ROOTS3, 0.2, 0.5, i=0) == pytest.approx(I0, rel=1e-12)
    assert singular_integral(ROOTS3, 0.2, 0.5, i=1) == pytest.approx(I1, rel=1e-12)


def test_single_root_interval_oracle():
    assert singular_integral(ROOTS3, 0.0, 0.2, i=0) == pytest.approx(J0, rel=1e-12)


def test_pole_weighted_oracle():
    val = singular_integral(ROOTS3, 0.2, 0.5, pole=0.75)
    assert val == pytest.approx(P0, rel=1e-11)


def test_genus_two_oracle():
    assert singular_integral(ROOTS5, 0.3, 0.45, i=1) == pytest.approx(G1, rel=1e-12)


def test_collapsed_interval_raises():
    with pytest.raises(CollapsedInterval):
        singular_integral(ROOTS3, 0.2, 0.2 + 1e-12)


def test_pole_too_close_raises():
    with pytest.raises(PoleTooClose):
        singular_integral(ROOTS3, 0.2, 0.5, pole=0.5 + 1e-12)


def test_collapse_config_labels_and_intervals():
    e = Ellipsoid((0.46, 0.58, 1.0))
    cc = collapse_config(e, (0.2, 0.5))
    assert cc.c == (0.2, 0.46, 0.5, 0.58, 1.0)
    assert cc.labels == ("l", "a", "l", "a", "a")
    assert cc.interval(0) == (0.0, 0.2)
    assert cc.interval(1) == (0.46, 0.5)
    assert cc.interval(2) == (0.58, 1.0)
    with pytest.raises(IndexError):
        cc.interval(3)
    assert cc.min_gap() == pytest.approx(0.04)


def test_config_validation():
    with pytest.raises(ValueError):
        CollapseConfig((0.5, 0.2, 1.0))
    with pytest.raises(ValueError):
        CollapseConfig((0.2, 0.5))
    with pytest.raises(ValueError):
        CollapseConfig((-0.1, 0.2, 0.5))


@given(st.tuples(st.floats(0.05, 0.3), st.floats(0.35, 0.6),
                 st.floats(0.65, 1.0)))
def test_integral_table_positive(roots):
    cc = CollapseConfig(tuple(sorted(roots)))
    table = integral_table(cc)
    assert table.K.shape == (1, 2)
    assert np.all(table.K > 0.0)
    assert np.all(np.isfinite(table.K))


def test_hyperelliptic_K_matches_engine():
    # intervals of the genus-1 configuration are (0, 0.2) and (0.5, 1.0)
    cc = CollapseConfig(ROOTS3)
    assert hyperelliptic_K(cc, 0, 0) == pytest.approx(J0, rel=1e-12)
    assert hyperelliptic_K(cc, 0, 1) == pytest.approx(K01, rel=1e-12)
    with pytest.raises(IndexError):
        hyperelliptic_K(cc, 1, 0)


def test_weighted_K_matches_engine():
    cc = CollapseConfig(ROOTS3)
    assert weighted_K(cc, 0, 0.75) == pytest.approx(W0, rel=1e-11)
    # absolute weight equals signed weight when the pole is above
    assert weighted_K(cc, 0, 0.75, absolute=True) == pytest.approx(
        weighted_K(cc, 0, 0.75), rel=1e-12)
