"""Hyperelliptic integrals over the merged semiaxis/caustic configuration.

The central objects are the integrals

    K_ij = integral over (c_{2j}, c_{2j+1}) of s^i ds / sqrt(T(s)),
    T(s) = prod_{i=1}^{2n+1} (c_i - s),

where ``c_1 < ... < c_{2n+1}`` merges the squared semiaxes with the
caustic parameters and ``c_0 = 0``.  ``T`` is positive on each open
integration interval and vanishes like a square root at those endpoints
that are roots.  The endpoint singularities are removed analytically by
the substitution ``s = m + h sin(theta)`` (``m`` midpoint, ``h``
half-length), after which the integrand is analytic and Gauss-Legendre
quadrature with order doubling converges spectrally.

Pole-weighted variants ``integral of s^i / ((alpha - s) sqrt(T))`` are
provided for the identities defining the extended frequency map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CollapsedInterval, NonConvergent, PoleTooClose
from .geometry import Ellipsoid

__all__ = [
    "QuadratureConfig",
    "CollapseConfig",
    "IntegralTable",
    "collapse_config",
    "singular_integral",
    "hyperelliptic_K",
    "integral_table",
    "weighted_K",
]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and thresholds of the quadrature engine."""

    rel_tol: float = 1e-13
    order_start: int = 8
    order_max: int = 1024
    gap_min_factor: float = 1e-9
    pole_min_factor: float = 1e-9
    max_panels: int = 4096

    def gap_min(self, scale: float) -> float:
        return self.gap_min_factor * scale

    def pole_min(self, scale: float) -> float:
        return self.pole_min_factor * scale


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class CollapseConfig:
    """Ordered merged vector ``c`` with provenance labels.

    ``labels[k]`` is ``"a"`` when ``c[k]`` is a squared semiaxis and
    ``"l"`` when it is a caustic parameter.
    """

    c: tuple[float, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        c = tuple(float(v) for v in self.c)
        if any(v <= 0.0 for v in c):
            raise ValueError("all entries of c must be positive")
        if any(hi <= lo for lo, hi in zip(c, c[1:])):
            raise ValueError("c must be strictly increasing")
        if len(c) % 2 == 0:
            raise ValueError("c must have odd length 2n+1")
        object.__setattr__(self, "c", c)
        if not self.labels:
            object.__setattr__(self, "labels", ("?",) * len(c))

    @property
    def n(self) -> int:
        return (len(self.c) - 1) // 2

    @property
    def scale(self) -> float:
        return self.c[-1]

    def interval(self, j: int) -> tuple[float, float]:
        """Integration interval ``(c_{2j}, c_{2j+1})`` with ``c_0 = 0``."""
        if not 0 <= j <= self.n:
            raise IndexError(f"interval index {j} out of range 0..{self.n}")
        lo = 0.0 if j == 0 else self.c[2 * j - 1]
        hi = self.c[2 * j]
        return lo, hi

    def gaps(self) -> list[float]:
        """Lengths of all consecutive gaps, starting with ``c_1 - 0``."""
        prev = 0.0
        out = []
        for v in self.c:
            out.append(v - prev)
            prev = v
        return out

    def min_gap(self) -> float:
        return min(self.gaps())


def collapse_config(e: Ellipsoid, lam) -> CollapseConfig:
    """Merge semiaxes and caustic values into a labelled configuration."""
    lam_vals = getattr(lam, "lam", lam)
    entries = [(float(a), "a") for a in e.semiaxes]
    entries += [(float(v), "l") for v in lam_vals]
    entries.sort()
    return CollapseConfig(tuple(v for v, _ in entries),
                          tuple(t for _, t in entries))


# ---------------------------------------------------------------------------
# Gauss-Legendre engine


@lru_cache(maxsize=32)
def _gl_nodes(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _gl_apply(g, lo: float, hi: float, order: int) -> float:
    x, w = _gl_nodes(order)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    return half * float(np.dot(w, g(mid + half * x)))


def _adaptive(g, lo, hi, abs_tol, depth=0):
    whole = _gl_apply(g, lo, hi, 64)
    mid = 0.5 * (lo + hi)
    left = _gl_apply(g, lo, mid, 64)
    right = _gl_apply(g, mid, hi, 64)
    if abs(left + right - whole) <= abs_tol or depth >= 52:
        if depth >= 52 and abs(left + right - whole) > 1e4 * abs_tol:
            raise NonConvergent("adaptive bisection exceeded maximum depth")
        return left + right
    # Children inherit the full tolerance: the error concentrates in the
    # panels touching a singular corner, so the recursion stays linear in
    # depth rather than branching into a full binary tree.
    return (_adaptive(g, lo, mid, abs_tol, depth + 1)
            + _adaptive(g, mid, hi, abs_tol, depth + 1))


def _integrate_theta(g, config: QuadratureConfig) -> tuple[float, float]:
    """Integrate a smooth function over ``(-pi/2, pi/2)`` by order doubling.

    Returns ``(value, achieved relative change)``.
    """
    lo, hi = -0.5 * np.pi, 0.5 * np.pi
    prev = _gl_apply(g, lo, hi, config.order_start)
    order = config.order_start
    while order < config.order_max:
        order *= 2
        cur = _gl_apply(g, lo, hi, order)
        change = abs(cur - prev) / max(1.0, abs(cur))
        if change < config.rel_tol:
            return cur, change
        prev = cur
    # spectral convergence failed; fall back to adaptive bisection
    cur = _adaptive(g, lo, hi, config.rel_tol * max(1.0, abs(prev)))
    return cur, config.rel_tol


# ---------------------------------------------------------------------------
# the workhorse integral


def singular_integral(roots, lo: float, hi: float, i: int = 0,
                      pole: float | None = None, pole_abs: bool = False,
                      config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Evaluate ``int_lo^hi s^i / ((pole - s)?) / sqrt(|prod(r - s)|) ds``.

    ``roots`` lists the zeros of the radicand.  Endpoints of the interval
    that coincide with roots contribute square-root singularities, which
    the ``s = m + h sin(theta)`` substitution removes exactly.  The
    radicand must have constant sign on the open interval; the absolute
    value is taken, so callers are responsible for the overall sign
    convention.  When ``pole`` is given the integrand carries the extra
    factor ``1/(pole - s)`` (or ``1/|pole - s|`` with ``pole_abs``).
    """
    roots = [float(r) for r in roots]
    lo, hi = float(lo), float(hi)
    if hi <= lo:
        raise ValueError("empty integration interval")
    scale = max(abs(r) for r in roots + [hi])
    if hi - lo < config.gap_min(scale):
        raise CollapsedInterval(
            f"interval length {hi - lo:.3e} below gap_min")
    if pole is not None:
        dist = max(lo - pole, pole - hi, 0.0)
        if dist < config.pole_min(scale):
            raise PoleTooClose(f"pole {pole} within pole_min of [{lo}, {hi}]")

    tol_match = 1e-13 * scale
    inner = list(roots)
    lo_is_root = any(abs(r - lo) <= tol_match for r in inner)
    hi_is_root = any(abs(r - hi) <= tol_match for r in inner)
    if lo_is_root:
        inner.remove(min(inner, key=lambda r: abs(r - lo)))
    if hi_is_root:
        inner.remove(min(inner, key=lambda r: abs(r - hi)))
    inner_arr = np.asarray(inner)

    m = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)

    def g(theta):
        sin_t = np.sin(theta)
        s = m + h * sin_t
        if inner_arr.size:
            rad = np.prod(np.abs(inner_arr[:, None] - s[None, :]), axis=0)
        else:
            rad = np.ones_like(s)
        if lo_is_root and hi_is_root:
            w = np.ones_like(s)
        elif hi_is_root:
            w = np.sqrt(h) * np.sqrt(1.0 + sin_t)
        elif lo_is_root:
            w = np.sqrt(h) * np.sqrt(1.0 - sin_t)
        else:
            w = h * np.cos(theta)
        val = (s ** i if i else 1.0) * w / np.sqrt(rad)
        if pole is not None:
            d = pole - s
            val = val / (np.abs(d) if pole_abs else d)
        return val

    value, _ = _integrate_theta(g, config)
    return value


# ---------------------------------------------------------------------------
# public operations


def hyperelliptic_K(c: CollapseConfig, i: int, j: int,
                    config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """The integral ``K_ij`` over the j-th interval of the configuration."""
    if not 0 <= i < c.n:
        raise IndexError(f"power index {i} out of range 0..{c.n - 1}")
    lo, hi = c.interval(j)
    return singular_integral(c.c, lo, hi, i=i, config=config)


@dataclass(frozen=True)
class IntegralTable:
    """All ``K_ij`` as an ``n x (n+1)`` matrix with error estimates."""

    K: np.ndarray
    rel_error: float

    def column(self, j: int) -> np.ndarray:
        return self.K[:, j]


def integral_table(c: CollapseConfig,
                   config: QuadratureConfig = DEFAULT_CONFIG) -> IntegralTable:
    """Assemble the full matrix of hyperelliptic integrals."""
    n = c.n
    K = np.empty((n, n + 1))
    for i in range(n):
        for j in range(n + 1):
            K[i, j] = hyperelliptic_K(c, i, j, config)
    if not np.all(np.isfinite(K)) or np.any(K <= 0.0):
        raise NonConvergent("integral table has nonpositive or nonfinite entries")
    return IntegralTable(K, config.rel_tol)


def weighted_K(c: CollapseConfig, j: int, pole: float, i: int = 0,
               absolute: bool = False,
               config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Pole-weighted integral ``int s^i / ((pole - s) sqrt(T)) ds`` over interval j.

    With ``absolute=True`` the weight is ``1/|pole - s|`` instead, as used
    by the collapse conditions where the pole may sit on either side.
    """
    lo, hi = c.interval(j)
    return singular_integral(c.c, lo, hi, i=i, pole=pole, pole_abs=absolute,
                             config=config)
