"""Ellipsoids, confocal quadrics, the billiard map, and caustic parameters.

Coordinate convention
---------------------
Semiaxes are stored in strictly increasing order ``a_1 < ... < a_{n+1}``
and coordinate ``x_k`` pairs with semiaxis ``a_k``.  For the planar case
(n = 1) this means points are reported as ``(x_minor, x_major)``; for the
spatial case (n = 2) as ``(x_small, x_mid, x_large)``.  The coordinate
hyperplane ``H_k = {x_k = 0}`` is the one spanned by all axes except the
k-th shortest, which is the ordering used by the winding-number counting
rules in :mod:`confocal.periodic`.

The caustic parameter of a line is the set of confocal parameters
``lambda`` for which the line is tangent to the quadric with semiaxes
``a_i - lambda``.  A nonsingular billiard trajectory in ``R^{n+1}`` has
exactly ``n`` such parameters, constant along the whole trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateChord,
    OutsideAnnulus,
    SingularCaustic,
)

Vector = np.ndarray


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class Ellipsoid:
    """A nondegenerate ellipsoid ``sum x_i^2 / a_i = 1`` in ``R^{n+1}``.

    Parameters
    ----------
    semiaxes : sequence of float
        The squared semiaxes ``a_i``.  They are sorted on construction;
        coincident values (symmetry of revolution) are rejected.
    """

    semiaxes: tuple[float, ...]

    def __init__(self, semiaxes):
        axes = tuple(sorted(float(a) for a in semiaxes))
        if len(axes) < 2:
            raise ValueError("need at least two semiaxes (n >= 1)")
        if axes[0] <= 0.0:
            raise ValueError("semiaxes must be positive")
        for lo, hi in zip(axes, axes[1:]):
            if hi <= lo * (1.0 + 1e-12):
                raise ValueError("semiaxes must be strictly increasing "
                                 "(degenerate/revolution cases rejected)")
        object.__setattr__(self, "semiaxes", axes)

    @property
    def n(self) -> int:
        """Number of caustics of a nonsingular trajectory (dimension count)."""
        return len(self.semiaxes) - 1

    @property
    def axes(self) -> Vector:
        return np.asarray(self.semiaxes)

    def normalized(self) -> "Ellipsoid":
        """Return the rescaled ellipsoid with largest semiaxis 1."""
        top = self.semiaxes[-1]
        return Ellipsoid(tuple(a / top for a in self.semiaxes))

    def residual(self, q: Vector) -> float:
        """Value of ``sum q_i^2/a_i - 1``."""
        return float(np.sum(np.asarray(q) ** 2 / self.axes) - 1.0)

    def gradient(self, q: Vector) -> Vector:
        """Outward (non-unit) normal ``grad(sum x_i^2/a_i)`` at ``q``, halved."""
        return np.asarray(q) / self.axes

    def unit_normal(self, q: Vector) -> Vector:
        g = self.gradient(q)
        return g / np.linalg.norm(g)

    def project(self, q: Vector) -> Vector:
        """Radially project a nearby point onto the ellipsoid."""
        q = np.asarray(q, dtype=float)
        s = float(np.sum(q ** 2 / self.axes))
        return q / np.sqrt(s)


@dataclass(frozen=True, eq=False)
class PhasePoint:
    """A billiard state: impact point ``q`` and outward unit direction ``p``."""

    q: Vector
    p: Vector

    def __post_init__(self):
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float))
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))

    def validate(self, e: Ellipsoid, tol_q: float = 1e-12, tol_p: float = 1e-10):
        if abs(e.residual(self.q)) > tol_q * 10:
            raise ValueError("q is not on the ellipsoid")
        if abs(np.linalg.norm(self.p) - 1.0) > tol_p:
            raise ValueError("p is not a unit vector")
        if float(np.dot(self.p, e.gradient(self.q))) <= 0.0:
            raise ValueError("p is not outward")


@dataclass(frozen=True)
class CausticParam:
    """Caustic parameters ``lambda`` of a trajectory with their type vector.

    ``sigma[i] = 0`` places ``lambda_i`` in ``(a_{i-1}, a_i)`` and
    ``sigma[i] = 1`` in ``(a_i, a_{i+1})``, with ``a_0 = 0``.
    """

    lam: tuple[float, ...]
    sigma: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lam", tuple(float(v) for v in self.lam))
        object.__setattr__(self, "sigma", tuple(int(s) for s in self.sigma))

    @property
    def n(self) -> int:
        return len(self.lam)

    def type_name(self) -> str:
        """Human-readable type such as ``EH1`` or ``H1H1`` (n = 2)."""
        parts = []
        for i, s in enumerate(self.sigma):
            parts.append("E" if (i == 0 and s == 0) else f"H{i + s}")
        return "".join(parts)


def sigma_of_lambda(e: Ellipsoid, lam) -> tuple[int, ...]:
    """Classify each caustic value into its interlacing interval."""
    bounds = (0.0,) + e.semiaxes
    sigma = []
    for i, v in enumerate(lam):
        j = int(np.searchsorted(np.asarray(bounds), v, side="right")) - 1
        s = j - i
        if s not in (0, 1):
            raise SingularCaustic(
                f"lambda_{i + 1} = {v} violates the interlacing structure")
        sigma.append(s)
    return tuple(sigma)


def caustic_param(e: Ellipsoid, lam) -> CausticParam:
    """Build a validated :class:`CausticParam` from raw caustic values."""
    lam = tuple(sorted(float(v) for v in lam))
    tol = 1e-10 * e.semiaxes[-1]
    for v in lam:
        if v <= tol or min(abs(v - a) for a in e.semiaxes) <= tol:
            raise SingularCaustic(f"caustic value {v} is singular")
    for lo, hi in zip(lam, lam[1:]):
        if hi - lo <= tol:
            raise SingularCaustic("coincident caustic values")
    return CausticParam(lam, sigma_of_lambda(e, lam))


@dataclass(frozen=True)
class BirkhoffCoord:
    """Planar Birkhoff coordinates ``(phi, r)`` on the phase annulus."""

    phi: float
    r: float


# ---------------------------------------------------------------------------
# billiard map


def reflect(e: Ellipsoid, x: PhasePoint) -> Vector:
    """Specular reflection of the outward direction at the impact point.

    Returns the inward unit direction ``p - 2 <p, n> n`` with ``n`` the
    outward unit normal at ``q``.
    """
    n = e.unit_normal(x.q)
    p = x.p - 2.0 * float(np.dot(x.p, n)) * n
    return p / np.linalg.norm(p)


def next_impact(e: Ellipsoid, q: Vector, p_in: Vector) -> tuple[Vector, float]:
    """Next intersection of the inward ray ``q + mu p_in`` with the ellipsoid.

    Returns ``(q', mu)``.  The chord length parameter ``mu`` is the nonzero
    root of the quadratic residual, computed from the analytically factored
    form and polished with one Newton step on the ellipsoid residual.
    """
    q = np.asarray(q, dtype=float)
    p = np.asarray(p_in, dtype=float)
    inv = 1.0 / e.axes
    A = float(np.sum(p * p * inv))
    B = float(np.sum(q * p * inv))
    mu = -2.0 * B / A
    mu_min = 1e-12 * e.semiaxes[-1]
    if mu < mu_min:
        raise DegenerateChord(f"chord parameter {mu:.3e} below threshold")
    # Newton polish on R(mu) = sum (q + mu p)^2 / a - 1.
    for _ in range(2):
        qq = q + mu * p
        r = float(np.sum(qq * qq * inv)) - 1.0
        dr = 2.0 * float(np.sum(qq * p * inv))
        if dr != 0.0:
            mu -= r / dr
    return q + mu * p, mu


def billiard_step(e: Ellipsoid, x: PhasePoint) -> PhasePoint:
    """One application of the billiard map.

    Reflect the outward direction at ``q``, travel to the next impact,
    and return the new state whose outward direction is the flight
    direction of the chord just traversed.
    """
    p_in = reflect(e, x)
    q_new, _ = next_impact(e, x.q, p_in)
    return PhasePoint(e.project(q_new), p_in)


def billiard_orbit(e: Ellipsoid, x: PhasePoint, k: int) -> list[PhasePoint]:
    """Orbit ``[x, B(x), ..., B^k(x)]`` of length ``k + 1``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    orbit = [x]
    cur = x
    for step in range(k):
        try:
            cur = billiard_step(e, cur)
        except DegenerateChord as exc:
            exc.step = step
            raise
        orbit.append(cur)
    return orbit


# ---------------------------------------------------------------------------
# caustic parameters of a line


def _tangency_value(e: Ellipsoid, q: Vector, v: Vector, mu: float) -> float:
    """The tangency polynomial of the line ``q + t v`` at confocal value mu.

    Vanishes exactly when the line is tangent to the confocal quadric
    ``Q_mu``.  The rational bracket has only simple poles at the semiaxes
    after cancellation, so the product with ``prod(a_i - mu)`` is a degree-n
    polynomial; it is evaluated here directly from the rational form, which
    is stable away from the poles.
    """
    d = e.axes - mu
    s1 = float(np.sum(q * v / d))
    s2 = float(np.sum(v * v / d))
    s3 = float(np.sum(q * q / d)) - 1.0
    return (s1 * s1 - s2 * s3) * float(np.prod(d))


def caustics_of_line(e: Ellipsoid, q: Vector, v: Vector) -> CausticParam:
    """Caustic parameters of the line through ``q`` with direction ``v``.

    The n roots of the tangency polynomial are isolated by sign changes on
    Chebyshev samples of each interlacing interval, then bisected to
    ``1e-14`` and polished with two Newton (secant) steps.
    """
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    scale = e.semiaxes[-1]
    tol_sing = 1e-10 * scale
    bounds = (0.0,) + e.semiaxes

    roots: list[float] = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        roots.extend(_roots_in_interval(e, q, v, lo, hi))
    # The tangency polynomial also vanishes at mu = 0 when v is tangent to
    # the ellipsoid itself; that root is genuine (lambda_1 = 0 limit) and
    # handled by the sampling above only in the open interval, so test it.
    f0 = _tangency_value(e, q, v, 0.0)
    if abs(f0) <= 1e-12 * scale ** e.n:
        roots.insert(0, 0.0)

    roots = sorted(roots)
    if len(roots) != e.n:
        raise SingularCaustic(
            f"found {len(roots)} caustic values, expected {e.n} "
            "(tangent, focal, or otherwise singular line)")
    for r in roots:
        if min(abs(r - a) for a in e.semiaxes) <= tol_sing:
            raise SingularCaustic(f"caustic value {r} coincides with a semiaxis")
    for r0, r1 in zip(roots, roots[1:]):
        if r1 - r0 <= tol_sing:
            raise SingularCaustic("coincident caustic values")
    if roots[0] <= tol_sing and roots[0] != 0.0:
        raise SingularCaustic("caustic value at the tangency limit 0")
    return CausticParam(tuple(roots), sigma_of_lambda(e, roots))


def _roots_in_interval(e: Ellipsoid, q, v, lo, hi, samples: int = 129):
    """Sign-change root isolation on an open interval between poles."""
    margin = 1e-13 * (hi - lo)
    for npts in (samples, 4 * samples, 32 * samples):
        theta = np.linspace(0.0, np.pi, npts)
        pts = 0.5 * (lo + hi) + 0.5 * (hi - lo) * np.cos(theta[::-1])
        pts = np.clip(pts, lo + margin, hi - margin)
        vals = np.array([_tangency_value(e, q, v, t) for t in pts])
        idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        if len(idx) > 0 or npts > samples * 8:
            break
    out = []
    for i in idx:
        a, b = float(pts[i]), float(pts[i + 1])
        fa = float(vals[i])
        for _ in range(60):
            m = 0.5 * (a + b)
            fm = _tangency_value(e, q, v, m)
            if fm == 0.0:
                a = b = m
                break
            if fa * fm < 0:
                b = m
            else:
                a, fa = m, fm
            if b - a < 1e-15 * max(1.0, abs(m)):
                break
        root = 0.5 * (a + b)
        # two secant polish steps
        for _ in range(2):
            h = 1e-8 * max(abs(root), 1e-8)
            f1 = _tangency_value(e, q, v, root)
            f2 = _tangency_value(e, q, v, root + h)
            if f2 != f1:
                step = f1 * h / (f2 - f1)
                cand = root - step
                if lo < cand < hi:
                    root = cand
        out.append(root)
    return out


def caustic_tangency(e: Ellipsoid, q: Vector, v: Vector, lam: float):
    """Tangency data of the segment ``q + t v`` with the caustic ``Q_lam``.

    Returns ``(t_star, discriminant)`` where ``t_star`` is the parameter of
    the closest approach in the confocal metric ``sum x_i^2/(a_i - lam)``
    and ``discriminant`` is the quadratic discriminant ``B^2 - A C`` of the
    intersection equation, which vanishes at tangency.
    """
    d = e.axes - lam
    A = float(np.sum(v * v / d))
    B = float(np.sum(q * v / d))
    C = float(np.sum(q * q / d)) - 1.0
    t_star = -B / A if A != 0.0 else np.inf
    return t_star, B * B - A * C


# ---------------------------------------------------------------------------
# planar Birkhoff coordinates


def _check_2d(e: Ellipsoid):
    if e.n != 1:
        raise ValueError("Birkhoff coordinates are defined for n = 1 only")


def _gamma(e: Ellipsoid, phi: float) -> tuple[Vector, Vector]:
    """Boundary parametrization and its derivative, minor axis first."""
    b, a = e.semiaxes
    q = np.array([np.sqrt(b) * np.sin(phi), np.sqrt(a) * np.cos(phi)])
    dq = np.array([np.sqrt(b) * np.cos(phi), -np.sqrt(a) * np.sin(phi)])
    return q, dq


def phase_to_state(e: Ellipsoid, phi: float, r: float) -> PhasePoint:
    """Planar state from Birkhoff coordinates ``(phi, r)``.

    ``phi`` parametrizes the boundary through the major vertex at
    ``phi = 0`` and ``r`` is the tangential momentum ``<gamma'(phi), p>``.
    """
    _check_2d(e)
    b, a = e.semiaxes
    q, dq = _gamma(e, phi)
    speed2 = a * np.sin(phi) ** 2 + b * np.cos(phi) ** 2
    if r * r >= speed2:
        raise OutsideAnnulus(f"r^2 = {r * r} >= {speed2}")
    speed = np.sqrt(speed2)
    t_hat = dq / speed
    n_hat = e.unit_normal(q)
    p = (r / speed) * t_hat + np.sqrt(1.0 - r * r / speed2) * n_hat
    return PhasePoint(q, p / np.linalg.norm(p))


def lambda_of_phase(e: Ellipsoid, phi: float, r: float) -> float:
    """Caustic parameter ``(a - b) sin^2 phi + b - r^2`` of a planar state."""
    _check_2d(e)
    b, a = e.semiaxes
    speed2 = a * np.sin(phi) ** 2 + b * np.cos(phi) ** 2
    if r * r >= speed2:
        raise OutsideAnnulus(f"r^2 = {r * r} >= {speed2}")
    return (a - b) * np.sin(phi) ** 2 + b - r * r


def state_to_phase(e: Ellipsoid, x: PhasePoint) -> BirkhoffCoord:
    """Inverse of :func:`phase_to_state`."""
    _check_2d(e)
    b, a = e.semiaxes
    phi = float(np.arctan2(x.q[0] / np.sqrt(b), x.q[1] / np.sqrt(a))) % (2 * np.pi)
    _, dq = _gamma(e, phi)
    r = float(np.dot(dq, x.p))
    return BirkhoffCoord(phi, r)


def separatrix_r(e: Ellipsoid, phi: float) -> float:
    """Upper separatrix ``r = sqrt(a - b) sin phi`` of the planar portrait."""
    _check_2d(e)
    b, a = e.semiaxes
    return float(np.sqrt(a - b) * np.sin(phi))
