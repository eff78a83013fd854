"""Range geometry of the triaxial frequency map and bifurcation curves.

For a triaxial ellipsoid the closure of the frequency-map image of each
caustic-type component is bounded by the images of the edges of the
caustic box: straight segments on the diagonal and on ``omega_1 = 1/2``
plus smooth curves given by the closed edge formulas (oscillation
numbers against rotation numbers).  This module assembles those
boundaries, decides membership of a target frequency in each range,
evaluates the fast inequality criteria, and traces the bifurcation
curves ``c = g(b)`` that bound the parameter-space regions admitting a
prescribed frequency, including the four minimal-period regions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfocalError, EmptySlice
from .frequency import (
    nu_x,
    nu_y,
    nu_z,
    rho_x,
    rho_y,
    rho_z,
    rotation_number_2d,
    varrho,
)

__all__ = [
    "TYPE_SIGMA",
    "Anchors",
    "RangeBoundary",
    "anchors",
    "range_boundary",
    "in_range",
    "CriteriaVerdict",
    "criteria_fast",
    "trace_g",
    "minimal_regions",
    "g_star_4_closed",
    "MINIMAL_FREQUENCIES",
]


TYPE_SIGMA = {
    "EH1": (0, 0),
    "H1H1": (1, 0),
    "EH2": (0, 1),
    "H1H2": (1, 1),
}
_SIGMA_TYPE = {v: k for k, v in TYPE_SIGMA.items()}

# caustic type and frequency vector of the minimal-period orbits
# (periods 5, 4, 5, 6)
MINIMAL_FREQUENCIES = {
    1: ("EH1", (2.0 / 5.0, 1.0 / 5.0)),
    2: ("H1H1", (3.0 / 8.0, 1.0 / 4.0)),
    3: ("EH2", (2.0 / 5.0, 1.0 / 5.0)),
    4: ("H1H2", (1.0 / 3.0, 1.0 / 6.0)),
}


def _type_name(sigma) -> str:
    if isinstance(sigma, str):
        if sigma not in TYPE_SIGMA:
            raise ValueError(f"unknown caustic type {sigma!r}")
        return sigma
    key = tuple(int(s) for s in sigma)
    if key not in _SIGMA_TYPE:
        raise ValueError(f"unknown caustic type vector {key}")
    return _SIGMA_TYPE[key]


# ---------------------------------------------------------------------------
# anchors


@dataclass(frozen=True)
class Anchors:
    """Characteristic rotation numbers and frequency-space corner points.

    ``rho_x, rho_y, rho_z`` are the closed-form planar-section limits
    (``sin^2 pi rho_x = c/b`` etc.); ``rho_star`` is the rotation number
    of the focal-ellipse section.  The points bound the four ranges: the
    triangle ``A B1 C1`` is exactly the doubled-hyperboloid range and
    ``D`` is the corner of the mixed range.
    """

    rho_x: float
    rho_y: float
    rho_z: float
    rho_star: float
    O: tuple[float, float]
    A: tuple[float, float]
    B1: tuple[float, float]
    B2: tuple[float, float]
    C1: tuple[float, float]
    C2: tuple[float, float]
    D: tuple[float, float]


def anchors(a: float, b: float, c: float) -> Anchors:
    """Anchor data of the frequency-space range picture."""
    if not 0.0 < c < b < a:
        raise ValueError("semiaxes must satisfy 0 < c < b < a")
    rx = varrho(c, b)
    ry = varrho(c, a)
    rz = varrho(b, a)
    rs = rotation_number_2d(c, b, a)
    return Anchors(
        rho_x=rx, rho_y=ry, rho_z=rz, rho_star=rs,
        O=(0.0, 0.0), A=(0.5, 0.5), B1=(0.5, rs), B2=(0.5, rz),
        C1=(rs, rs), C2=(rz, rz), D=(rx, ry),
    )


# ---------------------------------------------------------------------------
# boundary curves


def _edge_lambda_samples(lo: float, hi: float, samples: int) -> np.ndarray:
    """Graded parameter samples: uniform bulk plus geometric tails.

    The edge images vary logarithmically near the interval endpoints
    (merging-root regime), so plain uniform sampling misses the sharp
    bends near the corner points.
    """
    width = hi - lo
    t = (np.arange(samples) + 0.5) / samples
    tails = 10.0 ** -np.arange(1.0, 7.6, 0.25)
    pts = np.concatenate([lo + t * width,
                          lo + width * tails,
                          hi - width * tails])
    pts = np.unique(pts)
    margin = 2e-8 * max(hi, 1.0)
    return pts[(pts > lo + margin) & (pts < hi - margin)]


def _curve_points(branch: str, a: float, b: float, c: float,
                  samples: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sampled edge-image curve ``(lambda, omega_1, omega_2)``.

    Branches: ``red`` (ellipsoid/1-sheet range lower edge), ``cyan``
    (ellipsoid/2-sheet), ``brown`` and ``green`` (the two lower edges of
    the mixed range).
    """
    if branch == "red":
        lams = _edge_lambda_samples(0.0, c, samples)
        f1 = lambda l: nu_z(l, c, b, a)
        f2 = lambda l: rho_z(l, c, b, a)
    elif branch == "cyan":
        lams = _edge_lambda_samples(0.0, c, samples)
        f1 = lambda l: rho_x(l, c, b, a)
        f2 = lambda l: nu_x(l, c, b, a)
    elif branch == "brown":
        lams = _edge_lambda_samples(c, b, samples)
        f1 = lambda l: rho_x(l, c, b, a)
        f2 = lambda l: nu_x(l, c, b, a)
    elif branch == "green":
        lams = _edge_lambda_samples(b, a, samples)
        f1 = lambda l: nu_y(l, c, b, a)
        f2 = lambda l: rho_y(l, c, b, a)
    else:
        raise ValueError(f"unknown branch {branch!r}")
    w1, w2, keep = [], [], []
    for l in lams:
        try:
            v1, v2 = f1(l), f2(l)
        except ConfocalError:
            continue
        if np.isfinite(v1) and np.isfinite(v2):
            keep.append(l)
            w1.append(v1)
            w2.append(v2)
    return np.array(keep), np.array(w1), np.array(w2)


@lru_cache(maxsize=64)
def _cached_curve(branch: str, a: float, b: float, c: float, samples: int):
    lam, w1, w2 = _curve_points(branch, a, b, c, samples)
    order = np.argsort(w1)
    return lam[order], w1[order], w2[order]


def _branch_corners(branch: str, a: float, b: float, c: float):
    """Exact limit points of a boundary branch at its two parameter ends."""
    an = anchors(a, b, c)
    if branch == "red":
        return an.O, an.B1
    if branch == "cyan":
        return an.O, an.B2
    if branch == "brown":
        return an.D, an.B2
    return an.C1, an.D  # green


def _corner_tail(branch: str, a: float, b: float, c: float, omega1: float,
                 w1: np.ndarray, w2: np.ndarray) -> tuple[float, float]:
    """Boundary value past the last sample near the fold corner.

    The cyan and brown branches approach ``(1/2, rho_z)`` with both
    deviations decaying like the reciprocal log of the distance of the
    caustic parameter to its collision value, so the graph enters the
    corner with a finite slope that varies slowly.  The slope ratio is
    fitted linearly on the outermost samples and extrapolated; the
    returned error bound covers the fit residual and the extrapolated
    trend, so callers can widen the boundary band accordingly.
    """
    rz = varrho(b, a)
    m = min(14, len(w1))
    x = 0.5 - w1[-m:]
    s = (w2[-m:] - rz) / (w1[-m:] - 0.5)
    coef = np.polyfit(x, s, 1)
    resid = np.max(np.abs(np.polyval(coef, x) - s))
    xq = 0.5 - omega1
    sq = float(np.polyval(coef, xq))
    val = rz + sq * (omega1 - 0.5)
    err = xq * (3.0 * resid + abs(coef[0]) * max(x[-1] - xq, 0.0))
    return val, float(err)


def _curve_value(branch: str, a: float, b: float, c: float, omega1: float,
                 samples: int = 192, refine_tol: float | None = None,
                 with_error: bool = False):
    """Second component of the branch curve at abscissa ``omega1``.

    Interpolates the cached graded polyline between the exact corner
    limits; when ``refine_tol`` is given the bracketing interval is
    bisected in lambda until the abscissa matches to that tolerance, for
    verdicts near the boundary band.  With ``with_error`` the result is
    ``(value, uncertainty)``; the uncertainty is nonzero only past the
    sampled region near a logarithmic fold corner.
    """
    lam, w1, w2 = _cached_curve(branch, a, b, c, samples)
    lo_pt, hi_pt = _branch_corners(branch, a, b, c)
    if branch in ("cyan", "brown") and omega1 > w1[-1]:
        val, err = _corner_tail(branch, a, b, c, omega1, w1, w2)
        return (val, err) if with_error else val
    w1_ext = np.concatenate([[min(lo_pt[0], hi_pt[0])], w1,
                             [max(lo_pt[0], hi_pt[0])]])
    lo2, hi2 = ((lo_pt[1], hi_pt[1]) if lo_pt[0] <= hi_pt[0]
                else (hi_pt[1], lo_pt[1]))
    w2_ext = np.concatenate([[lo2], w2, [hi2]])
    val = float(np.interp(omega1, w1_ext, w2_ext))
    if refine_tol is None:
        return (val, 0.0) if with_error else val
    idx = int(np.searchsorted(w1, omega1))
    if idx <= 0 or idx >= len(w1):
        return (val, 0.0) if with_error else val
    la, lb = lam[idx - 1], lam[idx]
    if branch == "red":
        f1 = lambda l: nu_z(l, c, b, a)
        f2 = lambda l: rho_z(l, c, b, a)
    elif branch in ("cyan", "brown"):
        f1 = lambda l: rho_x(l, c, b, a)
        f2 = lambda l: nu_x(l, c, b, a)
    else:
        f1 = lambda l: nu_y(l, c, b, a)
        f2 = lambda l: rho_y(l, c, b, a)
    va, vb = w1[idx - 1] - omega1, w1[idx] - omega1
    if va * vb > 0:
        return (val, 0.0) if with_error else val
    for _ in range(60):
        lm = 0.5 * (la + lb)
        try:
            vm = f1(lm) - omega1
        except ConfocalError:
            break
        if abs(vm) < refine_tol:
            val = float(f2(lm))
            return (val, 0.0) if with_error else val
        if va * vm <= 0:
            lb, vb = lm, vm
        else:
            la, va = lm, vm
    val = float(f2(0.5 * (la + lb)))
    return (val, 0.0) if with_error else val


@dataclass(frozen=True)
class RangeBoundary:
    """Closed sampled boundary of one caustic-type frequency range."""

    sigma: tuple[int, int]
    type_name: str
    points: np.ndarray
    anchors: Anchors

    def area(self) -> float:
        """Enclosed (shoelace) area of the boundary polyline."""
        x, y = self.points[:, 0], self.points[:, 1]
        return 0.5 * abs(float(np.dot(x, np.roll(y, -1))
                               - np.dot(y, np.roll(x, -1))))


def _segment(p: tuple[float, float], q: tuple[float, float],
             samples: int) -> np.ndarray:
    t = np.linspace(0.0, 1.0, samples, endpoint=False)[:, None]
    return np.array(p)[None, :] * (1 - t) + np.array(q)[None, :] * t


def range_boundary(a: float, b: float, c: float, sigma,
                   samples: int = 192) -> RangeBoundary:
    """Closed boundary polyline of the frequency range of one type.

    Straight pieces (diagonal images of the outer-axis edges and the
    fold line ``omega_1 = 1/2``) are joined with the curved edge images
    sampled from the closed formulas; the polyline passes through the
    anchor corner points exactly.
    """
    name = _type_name(sigma)
    an = anchors(a, b, c)

    def curve(branch, start, end, reverse=False):
        _, w1, w2 = _cached_curve(branch, a, b, c, samples)
        pts = np.column_stack([w1, w2])
        if reverse:
            pts = pts[::-1]
        return np.vstack([[start], pts, [end]])[:-1]

    if name == "EH1":
        parts = [_segment(an.O, an.A, samples),
                 _segment(an.A, an.B1, samples),
                 curve("red", an.B1, an.O, reverse=True)]
    elif name == "H1H1":
        parts = [_segment(an.A, an.B1, samples),
                 _segment(an.B1, an.C1, samples),
                 _segment(an.C1, an.A, samples)]
    elif name == "EH2":
        parts = [_segment(an.O, an.A, samples),
                 _segment(an.A, an.B2, samples),
                 curve("cyan", an.B2, an.O, reverse=True)]
    else:  # H1H2
        parts = [_segment(an.C1, an.A, samples),
                 _segment(an.A, an.B2, samples),
                 curve("brown", an.B2, an.D, reverse=True),
                 curve("green", an.D, an.C1, reverse=True)]
    pts = np.vstack(parts + [parts[0][:1]])
    return RangeBoundary(TYPE_SIGMA[name], name, pts, an)


# ---------------------------------------------------------------------------
# membership


def _winding_inside(points: np.ndarray, w: np.ndarray) -> bool:
    x, y = points[:, 0], points[:, 1]
    x0, y0 = x[:-1] - w[0], y[:-1] - w[1]
    x1, y1 = x[1:] - w[0], y[1:] - w[1]
    cross_up = (y0 <= 0) & (y1 > 0)
    cross_dn = (y0 > 0) & (y1 <= 0)
    frac = np.zeros_like(y0)
    mask = cross_up | cross_dn
    frac[mask] = x0[mask] - y0[mask] * (x1[mask] - x0[mask]) \
        / (y1[mask] - y0[mask])
    winding = int(np.sum(cross_up & (frac > 0))) \
        - int(np.sum(cross_dn & (frac > 0)))
    return winding != 0


def in_range(omega0, sigma, a: float, b: float, c: float,
             band_tol: float = 1e-6, method: str = "graph") -> str:
    """Membership of a frequency vector in one caustic-type range.

    Returns ``"inside"``, ``"outside"``, or ``"boundary-band"`` (within
    ``band_tol`` of the boundary).  The default method treats the curved
    lower boundary as a graph over ``omega_1`` and solves on the edge
    formulas directly, which is exact up to the band width; ``"winding"``
    uses the even-odd test against the sampled boundary polyline.
    """
    name = _type_name(sigma)
    w1, w2 = float(omega0[0]), float(omega0[1])

    if method == "winding":
        rb = range_boundary(a, b, c, name)
        d = np.min(np.hypot(rb.points[:, 0] - w1, rb.points[:, 1] - w2))
        if d < band_tol:
            return "boundary-band"
        return "inside" if _winding_inside(rb.points, np.array([w1, w2])) \
            else "outside"
    if method != "graph":
        raise ValueError(f"unknown membership method {method!r}")

    # frequency-space wedge 0 < w2 < w1 < 1/2
    border = min(w2, w1 - w2, 0.5 - w1)
    if border < -band_tol:
        return "outside"
    if border < band_tol:
        return "boundary-band"

    an = anchors(a, b, c)
    if name == "H1H1":
        if abs(w2 - an.rho_star) < band_tol:
            return "boundary-band"
        return "inside" if w2 > an.rho_star else "outside"

    def against(branch):
        val, err = _curve_value(branch, a, b, c, w1, with_error=True)
        # polyline interpolation is good to ~1e-3; sharpen on the edge
        # formulas whenever the verdict could depend on it
        if err == 0.0 and abs(w2 - val) < max(1e-3, 100 * band_tol):
            val = _curve_value(branch, a, b, c, w1, refine_tol=1e-12)
        if abs(w2 - val) < max(band_tol, err):
            return "boundary-band"
        return "inside" if w2 > val else "outside"

    if name == "EH1":
        return against("red")
    if name == "EH2":
        return against("cyan")

    # H1H2: left border at omega_1 = rho_star, lower border split at D
    if abs(w1 - an.rho_star) < band_tol:
        return "boundary-band"
    if w1 < an.rho_star:
        return "outside"
    return against("green" if w1 < an.rho_x else "brown")


# ---------------------------------------------------------------------------
# fast criteria


@dataclass(frozen=True)
class CriteriaVerdict:
    """Outcome of the inequality criteria for one caustic type.

    ``sufficient`` means a sufficient condition holds (the frequency is
    in the range); ``excluded`` means a necessary condition fails (it is
    not).  Both false means the criteria are inconclusive.
    """

    sufficient: bool
    excluded: bool


def criteria_fast(omega0, a: float, b: float, c: float
                  ) -> dict[str, CriteriaVerdict]:
    """Inequality criteria for all four caustic-type ranges.

    Combines the frequency-space tests (through the focal-ellipse
    rotation number) with the algebraic parameter-space tests, which
    need no elliptic integral.
    """
    w1, w2 = float(omega0[0]), float(omega0[1])
    if not 0.0 < w2 < w1 < 0.5:
        raise ValueError("omega0 must satisfy 0 < omega_2 < omega_1 < 1/2")
    rs = rotation_number_2d(c, b, a)
    s2 = np.sin(np.pi * w2) ** 2
    s2_half = np.sin(np.pi * w2 / (2.0 * w1)) ** 2

    # parameter-space constants (homogeneous of degree 0 in a, b, c)
    b03 = b04 = s2_half
    c01 = c03 = beta04 = s2 / np.sin(np.pi * w1) ** 2
    c02 = c04 = s2

    eh1 = CriteriaVerdict(
        sufficient=w2 > rs or c < c01 * b,
        excluded=w2 / (2.0 * w1) <= rs or c >= c01 * a)
    h1h1 = CriteriaVerdict(
        sufficient=w2 > rs or c < c02 * b,
        excluded=w2 <= rs or c >= c02 * a)
    eh2 = CriteriaVerdict(
        sufficient=b < a * s2 or (b03 - c03) * c < c03 * (b03 * a - b),
        excluded=b >= a * s2_half)
    # the mixed-type triangle has corners (0,0), (b04, 0), (beta04, c04);
    # the two nontrivial edge tests below are its exact membership test
    h1h2_tri = (beta04 * c < c04 * b
                and (b04 - beta04) * c < c04 * (b04 * a - b))
    h1h2 = CriteriaVerdict(
        sufficient=(w2 > rs and b < a * s2) or h1h2_tri,
        excluded=w1 <= rs or c >= a * s2 or b >= a * s2_half)
    return {"EH1": eh1, "H1H1": h1h1, "EH2": eh2, "H1H2": h1h2}


# ---------------------------------------------------------------------------
# bifurcation curves in parameter space


def trace_g(sigma, omega0, b_grid, band_tol: float = 1e-12) -> np.ndarray:
    """Bifurcation curve ``c = g(b)`` for a fixed frequency vector.

    For each ``b`` the flattening direction is bisected: small ``c``
    admits the frequency, large ``c`` does not, and the transition is
    located in ``log c`` (uniform relative accuracy, since the curve
    approaches 0 at its endpoints through a root-finding problem that is
    singular in ``c``).  Returns rows ``(b, g(b))``; ``g(b) = b`` marks
    slices fully inside.  Raises :class:`EmptySlice` when a slice has no
    admissible ``c`` at all.
    """
    name = _type_name(sigma)
    out = []
    for b in np.atleast_1d(np.asarray(b_grid, dtype=float)):
        if not 0.0 < b < 1.0:
            raise ValueError("b_grid entries must lie in (0, 1)")
        # the quadrature floor keeps c bounded away from 0; the traced
        # curves vanish only at isolated slice endpoints
        c_lo, c_hi = 1e-7 * b, (1.0 - 1e-6) * b

        def inside(cv):
            return in_range((omega0[0], omega0[1]), name, 1.0, b, cv,
                            band_tol=band_tol) == "inside"

        if inside(c_hi):
            out.append((b, b))
            continue
        if not inside(c_lo):
            raise EmptySlice(
                f"no admissible flattening at b = {b} for type {name}")
        t_lo, t_hi = np.log(c_lo), np.log(c_hi)
        for _ in range(90):
            t_mid = 0.5 * (t_lo + t_hi)
            if inside(np.exp(t_mid)):
                t_lo = t_mid
            else:
                t_hi = t_mid
            if np.exp(t_hi) - np.exp(t_lo) < 1e-10:
                break
        out.append((b, np.exp(0.5 * (t_lo + t_hi))))
    return np.array(out)


def minimal_regions(j: int, b_grid) -> np.ndarray:
    """Boundary curve of the j-th minimal-period parameter region.

    ``j`` indexes the four caustic types with their minimal rational
    frequencies (periods 5, 4, 5, 6).
    """
    if j not in MINIMAL_FREQUENCIES:
        raise ValueError("j must be in 1..4")
    name, omega0 = MINIMAL_FREQUENCIES[j]
    return trace_g(name, omega0, b_grid)


def g_star_4_closed(b: float) -> float:
    """Closed form of the decreasing branch of the 4th minimal region.

    Valid for ``1/3 <= b <= 1/2``.
    """
    if not 1.0 / 3.0 <= b <= 0.5:
        raise ValueError("closed form valid only on [1/3, 1/2]")
    return (1.0 - 2.0 * b) * b / (1.0 - b) ** 2
