"""Periodic billiard trajectories and their integer invariants.

A nonsingular billiard trajectory is periodic exactly when the frequency
map is rational, ``omega_j = m_j / (2 m_0)``, with integer winding
numbers ``m_0, ..., m_n``: the period, and per-interval counts of
hyperplane crossings, projected rotations, or caustic touches.  This
module extracts those counts from computed orbits, tests closure
algebraically through the rank of a Hankel matrix of power-series
coefficients, inverts the frequency map to locate resonant caustics,
refines near-closed orbits by Gauss-Newton, and evaluates the
combinatorial period lower bounds attached to each caustic-type vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import mpmath as mp
import numpy as np

from .errors import (
    AmbiguousCount,
    ConfocalError,
    NoConvergence,
    NotClosed,
    NotInRange,
)
from .frequency import frequency
from .geometry import (
    CausticParam,
    Ellipsoid,
    PhasePoint,
    billiard_orbit,
    caustic_param,
    caustic_tangency,
    caustics_of_line,
)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, collapse_config

__all__ = [
    "WindingNumbers",
    "CayleyReport",
    "closure_symmetry",
    "winding_from_orbit",
    "cayley_test",
    "sharpen_resonant_caustic",
    "invert_frequency",
    "refine_periodic",
    "state_with_caustics",
    "E_sigma",
    "kappa_sigma",
    "kappa_table",
    "minimal_caustics_2d",
]


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class WindingNumbers:
    """Integer invariants ``(m_0, ..., m_n)`` of a periodic trajectory.

    ``m[0]`` is the period; ``m[j]`` counts the geometric events of
    interval ``j`` (crossings, half-turns, or caustic touches) along one
    period.  ``sigma`` is the caustic type vector.
    """

    m: tuple[int, ...]
    sigma: tuple[int, ...]

    @property
    def period(self) -> int:
        return self.m[0]

    def omega(self) -> tuple[float, ...]:
        """Rational frequency vector ``m_j / (2 m_0)``."""
        return tuple(mj / (2.0 * self.m[0]) for mj in self.m[1:])


@dataclass(frozen=True)
class CayleyReport:
    """Rank diagnostic of the algebraic closure condition.

    Closure after ``m`` bounces (up to the sign-symmetry group of the
    ellipsoid) is equivalent to the Hankel matrix of series coefficients
    having rank below ``m - n``; ``residual`` is the smallest singular
    value normalized by the larger of the top singular value and the
    typical coefficient magnitude, so it is scale free even for a single
    column.
    """

    m: int
    shape: tuple[int, int]
    singular_values: tuple[float, ...]
    residual: float


# ---------------------------------------------------------------------------
# winding numbers from orbits


def closure_symmetry(e: Ellipsoid, orbit, tol: float = np.inf):
    """Best diagonal-sign symmetry closing the orbit endpoints.

    Returns ``(signs, err)`` where ``signs`` is the +-1 vector ``g`` that
    minimizes ``|g q_m - q_0| + |g p_m - p_0|`` over the ``2^(n+1)``
    coordinate reflections.  Raises :class:`NotClosed` when the best
    mismatch exceeds ``tol``.
    """
    q0, p0 = orbit[0].q, orbit[0].p
    qm, pm = orbit[-1].q, orbit[-1].p
    best, best_err = None, np.inf
    for signs in product((1.0, -1.0), repeat=e.n + 1):
        s = np.array(signs)
        err = float(np.linalg.norm(s * qm - q0) + np.linalg.norm(s * pm - p0))
        if err < best_err:
            best, best_err = s, err
    if best_err > tol:
        raise NotClosed(
            f"orbit endpoint mismatch {best_err:.3e} exceeds {tol:.1e} "
            "even up to sign symmetry")
    return best, best_err


def _count_crossings(vertices, coord: int, ambig_tol: float) -> int:
    vals = np.array([q[coord] for q in vertices])
    if np.any(np.abs(vals) < ambig_tol):
        raise AmbiguousCount(
            f"impact point lies on hyperplane x_{coord + 1} = 0 within "
            "the counting tolerance")
    return int(np.sum(vals[:-1] * vals[1:] < 0.0))


def _count_half_turns(vertices, i: int, j: int) -> int:
    angles = np.array([np.arctan2(q[j], q[i]) for q in vertices])
    diffs = np.diff(angles)
    diffs = (diffs + np.pi) % (2.0 * np.pi) - np.pi
    total = float(np.sum(diffs)) / np.pi
    m = int(round(abs(total)))
    if abs(abs(total) - m) > 0.05:
        raise AmbiguousCount(
            f"accumulated projected angle {total:.6f} pi is not close to "
            "an integer number of half-turns")
    return m


def _count_touches(e: Ellipsoid, vertices, lam_val: float,
                   ambig_tol: float) -> int:
    count = 0
    for qa, qb in zip(vertices[:-1], vertices[1:]):
        v = qb - qa
        t_star, _ = caustic_tangency(e, qa, v, lam_val)
        if min(abs(t_star), abs(t_star - 1.0)) < ambig_tol:
            raise AmbiguousCount(
                f"tangency point at segment parameter {t_star:.3e} is too "
                "close to an impact point")
        if 0.0 < t_star < 1.0:
            count += 1
    return count


def winding_from_orbit(e: Ellipsoid, orbit, sigma=None,
                       closure_tol: float = 1e-8,
                       ambig_tol: float = 1e-10) -> WindingNumbers:
    """Winding numbers of a closed (or closed-up-to-symmetry) orbit.

    ``orbit`` is the impact-point sequence ``[x_0, ..., x_m]`` produced
    by :func:`confocal.geometry.billiard_orbit`; its last point must
    return to the first within ``closure_tol``, possibly after a
    coordinate reflection, in which case the counts are taken over the
    doubled true period.  Counting rules depend on the interval type:
    hyperplane crossings when one endpoint is a semiaxis and the other a
    caustic value, half-turns of the projection onto a coordinate plane
    when both are semiaxes, and caustic touches interior to a segment
    when both are caustic values.
    """
    g, err = closure_symmetry(e, orbit, closure_tol)
    base = [x.q for x in orbit[:-1]]
    if np.all(g > 0):
        vertices = base + [orbit[0].q]
    else:
        # the reflected copy continues the trajectory; the doubled orbit
        # closes exactly because g is an involution
        vertices = base + [g * q for q in base] + [orbit[0].q]
    m0 = len(vertices) - 1

    lam = caustics_of_line(e, orbit[0].q, orbit[1].q - orbit[0].q)
    if sigma is not None and tuple(sigma) != lam.sigma:
        raise ValueError(
            f"declared type {tuple(sigma)} does not match the computed "
            f"caustic type {lam.sigma}")
    cc = collapse_config(e, lam)
    # semiaxis rank (1-based) of each merged entry that is a semiaxis
    rank = {}
    seen = 0
    for k, lab in enumerate(cc.labels):
        if lab == "a":
            seen += 1
            rank[k] = seen

    pos_tol = ambig_tol * max(1.0, np.sqrt(cc.scale))
    m = [m0]
    for j in range(1, e.n + 1):
        kl, kr = 2 * j - 1, 2 * j
        left_lab, right_lab = cc.labels[kl], cc.labels[kr]
        if left_lab == "a" and right_lab == "l":
            m.append(_count_crossings(vertices, rank[kl] - 1, pos_tol))
        elif left_lab == "l" and right_lab == "a":
            m.append(_count_crossings(vertices, rank[kr] - 1, pos_tol))
        elif left_lab == "a" and right_lab == "a":
            m.append(_count_half_turns(vertices, rank[kl] - 1, rank[kr] - 1))
        else:
            t1 = _count_touches(e, vertices, cc.c[kl], ambig_tol)
            t2 = _count_touches(e, vertices, cc.c[kr], ambig_tol)
            if t1 != t2:
                raise AmbiguousCount(
                    f"unequal touch counts {t1} and {t2} with the two "
                    "caustics of an oscillation interval")
            m.append(t1)
    return WindingNumbers(tuple(m), lam.sigma)


# ---------------------------------------------------------------------------
# algebraic closure test


def cayley_test(e: Ellipsoid, lam, m: int) -> CayleyReport:
    """Rank diagnostic for closure after ``m`` bounces up to symmetry.

    Expands ``sqrt(prod(a_i - s) prod(lambda_i - s))`` as a power series
    ``sum h_k s^k`` in high-precision arithmetic and reports the singular
    values of the ``(m-1) x (m-n)`` matrix with entries
    ``h_{m+1+row-col}``; rank below ``m - n`` (residual ~ 0) is
    equivalent to closure.
    """
    n = e.n
    if m < n + 1:
        raise ValueError(f"trial period m = {m} must be at least n+1 = {n + 1}")
    lam_vals = getattr(lam, "lam", lam)
    lam_vals = (lam_vals,) if np.isscalar(lam_vals) else tuple(lam_vals)
    if len(lam_vals) != n:
        raise ValueError(f"expected {n} caustic values, got {len(lam_vals)}")

    dps = max(64, 16 + 8 * m)
    with mp.workdps(dps):
        roots = [mp.mpf(a) for a in e.semiaxes] + [mp.mpf(v) for v in lam_vals]
        # coefficients of prod (r - s) in ascending powers of s
        poly = [mp.mpf(1)]
        for r in roots:
            poly = ([r * poly[0]]
                    + [r * poly[k] - poly[k - 1] for k in range(1, len(poly))]
                    + [-poly[-1]])
        nterms = 2 * m
        p = [poly[k] if k < len(poly) else mp.mpf(0) for k in range(nterms)]
        h = [mp.sqrt(p[0])]
        for k in range(1, nterms):
            acc = p[k]
            for i in range(1, k):
                acc -= h[i] * h[k - i]
            h.append(acc / (2 * h[0]))

        # The coefficients follow a geometric trend |h_k| ~ s0 g^k set by
        # the smallest root, so the raw entries span many orders of
        # magnitude.  Balance by the trend (a diagonal row/column scaling,
        # which preserves rank exactly); medians keep the fit robust
        # against the near-zero coefficients present at resonance.
        logs = [(k, float(mp.log(abs(h[k]))))
                for k in range(nterms) if h[k] != 0]
        if len(logs) >= 2:
            diffs = [(lb - la) / (kb - ka)
                     for (ka, la), (kb, lb) in zip(logs, logs[1:])]
            slope = float(np.median(diffs))
            intercept = float(np.median([l - slope * k for k, l in logs]))
        else:
            slope, intercept = 0.0, 0.0

        rows, cols = m - 1, m - n
        A = mp.matrix(rows, cols)
        for r in range(rows):
            for c in range(cols):
                k = m + 1 + r - c
                A[r, c] = h[k] * mp.exp(-(intercept + slope * k))
        sv = mp.svd_r(A, compute_uv=False)
        svals = sorted((float(sv[k]) for k in range(cols)), reverse=True)

    # Balanced Hankel matrices still have singular values that decay with
    # size, so only the collapse of the smallest one relative to its
    # neighbour signals rank deficiency; a single column is compared with
    # its own trend value instead.
    if cols >= 2:
        residual = svals[-1] / max(svals[-2], 1e-300)
    else:
        residual = svals[0]
    return CayleyReport(m, (rows, cols), tuple(svals), residual)


def sharpen_resonant_caustic(e: Ellipsoid, lam, m: int,
                             maxfev: int = 200) -> CausticParam:
    """Polish a near-resonant caustic to the closure-condition minimum.

    Caustic values recovered from a refined orbit carry ~1e-12 extraction
    error, which the rank residual inherits; a derivative-free local
    minimization of the log-residual recovers the last few digits the
    double-precision parametrization allows.
    """
    from scipy.optimize import minimize

    lam_vals = getattr(lam, "lam", lam)
    l0 = np.atleast_1d(np.asarray(lam_vals, dtype=float))

    def objective(l):
        return np.log10(max(cayley_test(e, tuple(l), m).residual, 1e-30))

    simplex = [l0] + [l0 + 3e-12 * e.semiaxes[-1] * np.eye(len(l0))[k]
                      for k in range(len(l0))]
    res = minimize(objective, l0, method="Nelder-Mead",
                   options=dict(xatol=1e-16, fatol=0.05, maxfev=maxfev,
                                initial_simplex=simplex))
    best = res.x if res.fun <= objective(l0) else l0
    return caustic_param(e, best)


# ---------------------------------------------------------------------------
# launching an orbit with prescribed caustics


def _sigma_boxes(e: Ellipsoid, sigma) -> list[tuple[float, float]]:
    ext = (0.0,) + tuple(e.semiaxes)
    boxes = []
    for j, s in enumerate(sigma, start=1):
        if s not in (0, 1):
            raise ValueError("sigma entries must be 0 or 1")
        boxes.append((ext[j - 1 + s], ext[j + s]))
    return boxes


def state_with_caustics(e: Ellipsoid, lam, seed: int = 0) -> PhasePoint:
    """A phase point whose trajectory has the prescribed caustics.

    For an ellipse the launch point is the minor vertex, where the chord
    parameter has a closed form.  In higher dimension the inward
    directions tangent to all caustics are found by a damped root solve
    of the tangency discriminants over unit directions, retried from a
    deterministic sequence of pseudo-random seeds.
    """
    lam_vals = getattr(lam, "lam", lam)
    lam_vals = (lam_vals,) if np.isscalar(lam_vals) else tuple(lam_vals)
    if e.n == 1:
        from .geometry import phase_to_state

        b, a = e.semiaxes
        (lv,) = lam_vals
        # generic boundary angle: halfway between the tangency threshold
        # (hyperbola caustics exist only where sin^2 phi > (lam-b)/(a-b))
        # and the minor vertex, so no impact point sits on an axis
        s2 = 0.5 * (1.0 + max(0.0, (lv - b) / (a - b)))
        phi = np.arcsin(np.sqrt(s2))
        r = np.sqrt((a - b) * s2 + b - lv)
        return phase_to_state(e, phi, r)

    from scipy.optimize import least_squares

    rng = np.random.default_rng(seed)
    scale = e.semiaxes[-1]
    for _ in range(64):
        raw = rng.normal(size=e.n + 1)
        q = e.project(raw * np.sqrt(e.axes))
        n_in = -e.unit_normal(q)

        # orthonormal frame spanning the tangent plane at q
        basis = [n_in]
        for k in range(e.n + 1):
            v = np.zeros(e.n + 1)
            v[k] = 1.0
            for u in basis:
                v = v - np.dot(v, u) * u
            if np.linalg.norm(v) > 1e-8:
                basis.append(v / np.linalg.norm(v))
        frame = np.array(basis[1:e.n + 1])

        def direction(t):
            p = n_in + frame.T @ t
            return p / np.linalg.norm(p)

        def discriminants(t):
            p = direction(t)
            out = []
            for lv in lam_vals:
                d = e.axes - lv
                A = np.sum(p * p / d)
                B = np.sum(q * p / d)
                C = np.sum(q * q / d) - 1.0
                out.append((B * B - A * C) / scale)
            return np.array(out)

        sol = least_squares(discriminants, rng.normal(scale=0.5, size=e.n),
                            method="lm", xtol=1e-15, ftol=1e-15)
        if not np.all(np.abs(sol.fun) < 1e-12):
            continue
        p = direction(sol.x)
        if np.dot(p, n_in) <= 1e-6:
            continue
        try:
            found = caustics_of_line(e, q, p)
        except ConfocalError:
            continue
        if np.allclose(found.lam, lam_vals, rtol=0, atol=1e-7 * scale):
            # store the pre-reflection mirror of the inward chord so the
            # first billiard step travels along the tangent direction
            n_out = e.unit_normal(q)
            p_state = p - 2.0 * float(np.dot(p, n_out)) * n_out
            return PhasePoint(q, p_state / np.linalg.norm(p_state))
    raise NoConvergence(
        "no unit direction tangent to all prescribed caustics was found")


# ---------------------------------------------------------------------------
# frequency inversion


def invert_frequency(e: Ellipsoid, sigma, omega0, seed_grid: int = 24,
                     config: QuadratureConfig = DEFAULT_CONFIG) -> CausticParam:
    """Solve ``omega(lambda) = omega0`` inside the caustic-type box.

    A coarse grid scan over the admissible box seeds a damped Newton
    iteration with finite-difference Jacobian; steps are clipped to stay
    inside the box.  Raises :class:`NotInRange` when no grid sample comes
    within a tenth of the sampled frequency spread, and
    :class:`NoConvergence` when Newton stalls.
    """
    sigma = tuple(int(s) for s in sigma)
    omega0 = np.atleast_1d(np.asarray(omega0, dtype=float))
    n = e.n
    if len(sigma) != n or omega0.shape != (n,):
        raise ValueError("sigma and omega0 must have length n")
    boxes = _sigma_boxes(e, sigma)
    lo = np.array([b[0] for b in boxes])
    hi = np.array([b[1] for b in boxes])
    width = hi - lo

    def omega_of(lam_vec):
        return np.asarray(
            frequency(e, caustic_param(e, lam_vec), config).omega)

    # --- grid scan: uniform interior points plus geometrically graded
    # points toward both box endpoints, where the frequency map varies
    # logarithmically and resonances concentrate
    edge_offsets = width[:, None] * 10.0 ** -np.arange(1.5, 5.0, 0.5)
    axes_pts = [np.sort(np.concatenate([
        lo[k] + (np.arange(seed_grid) + 0.5) / seed_grid * width[k],
        lo[k] + edge_offsets[k],
        hi[k] - edge_offsets[k],
    ])) for k in range(n)]
    best_lam, best_res = None, np.inf
    samples = []
    min_sep = 1e-3 * e.semiaxes[-1]
    for combo in product(*axes_pts):
        lam_vec = np.array(combo)
        if np.any(np.diff(lam_vec) < min_sep):
            continue
        try:
            om = omega_of(lam_vec)
        except ConfocalError:
            continue
        samples.append(om)
        res = float(np.linalg.norm(om - omega0))
        if res < best_res:
            best_lam, best_res = lam_vec, res
    if not samples:
        raise NotInRange("no admissible grid sample in the caustic-type box")
    spread = np.asarray(samples)
    diam = float(np.linalg.norm(spread.max(axis=0) - spread.min(axis=0)))
    if best_res > 0.1 * max(diam, 1e-12):
        raise NotInRange(
            f"best grid residual {best_res:.3e} exceeds a tenth of the "
            f"sampled frequency spread {diam:.3e}")

    # --- damped Newton
    lam_vec = best_lam.copy()
    res_vec = omega_of(lam_vec) - omega0
    res = float(np.linalg.norm(res_vec))
    margin = 1e-9 * width
    for _ in range(60):
        if res <= 1e-10:
            return caustic_param(e, lam_vec)
        J = np.empty((n, n))
        h = np.minimum(1e-6 * width,
                       0.25 * np.minimum(lam_vec - lo, hi - lam_vec))
        for k in range(n):
            dp = np.zeros(n)
            dp[k] = h[k]
            J[:, k] = (omega_of(lam_vec + dp) - omega_of(lam_vec - dp)) \
                / (2.0 * h[k])
        try:
            step = np.linalg.solve(J, -res_vec)
        except np.linalg.LinAlgError:
            raise NoConvergence("singular finite-difference Jacobian")
        accepted = False
        for _ in range(20):
            cand = np.clip(lam_vec + step, lo + margin, hi - margin)
            if n > 1 and np.any(np.diff(cand) < min_sep):
                step *= 0.5
                continue
            try:
                cand_vec = omega_of(cand) - omega0
            except ConfocalError:
                step *= 0.5
                continue
            cand_res = float(np.linalg.norm(cand_vec))
            if cand_res < res:
                lam_vec, res_vec, res = cand, cand_vec, cand_res
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
    if res <= 1e-10:
        return caustic_param(e, lam_vec)
    raise NoConvergence(
        f"Newton stalled at frequency residual {res:.3e}")


# ---------------------------------------------------------------------------
# orbit refinement


def refine_periodic(e: Ellipsoid, x: PhasePoint, m0: int,
                    tol: float = 1e-12, max_iter: int = 40) -> PhasePoint:
    """Gauss-Newton refinement of a near-closed orbit of period ``m0``.

    The unknowns are the raw launch position (radially projected onto
    the ellipsoid) and the raw direction (normalized); the residual is
    the endpoint mismatch of position and direction after ``m0`` steps,
    composed with the best-fitting coordinate reflection detected on the
    initial orbit.  Steps are halved up to 20 times on residual
    increase.
    """
    orbit = billiard_orbit(e, x, m0)
    g, err0 = closure_symmetry(e, orbit)
    if err0 > 1e-3:
        raise NotClosed(
            f"initial orbit mismatch {err0:.3e} exceeds the 1e-3 "
            "refinement basin")

    dim = e.n + 1
    scale = np.sqrt(e.semiaxes[-1])

    def unpack(u):
        q = e.project(u[:dim])
        p = u[dim:]
        return PhasePoint(q, p / np.linalg.norm(p))

    def residual(u):
        pt = unpack(u)
        end = billiard_orbit(e, pt, m0)[-1]
        return np.concatenate([g * end.q - pt.q, g * end.p - pt.p])

    u = np.concatenate([x.q, x.p])
    r = residual(u)
    rn = float(np.linalg.norm(r))
    for _ in range(max_iter):
        if rn <= tol:
            break
        J = np.empty((2 * dim, 2 * dim))
        for k in range(2 * dim):
            h = 1e-7 * (scale if k < dim else 1.0)
            dp = np.zeros(2 * dim)
            dp[k] = h
            J[:, k] = (residual(u + dp) - residual(u - dp)) / (2.0 * h)
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        accepted = False
        for _ in range(20):
            try:
                cand_r = residual(u + step)
            except ConfocalError:
                step *= 0.5
                continue
            cand_rn = float(np.linalg.norm(cand_r))
            if cand_rn < rn:
                u, r, rn = u + step, cand_r, cand_rn
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
    if rn > 1e-11:
        raise NoConvergence(
            f"refinement stalled at closure residual {rn:.3e}")
    return unpack(u)


# ---------------------------------------------------------------------------
# period lower bounds


def E_sigma(sigma) -> frozenset:
    """Index set of forced-even winding numbers for type vector sigma."""
    sigma = tuple(int(s) for s in sigma)
    n = len(sigma)
    out = set()
    if sigma[0] == 1:
        out.add(0)
    for j in range(1, n):
        if (sigma[j - 1], sigma[j]) != (1, 0):
            out.add(j)
    out.add(n)
    return frozenset(out)


def kappa_sigma(sigma) -> int:
    """Minimal period compatible with the parity pattern of type sigma.

    Minimum of ``m_0`` over strictly decreasing integer sequences
    ``2 <= m_n < ... < m_0`` with ``m_j`` even for every forced index.
    Each parity constraint only pushes the next term up by at most one,
    so the greedy bottom-up choice is optimal.
    """
    sigma = tuple(int(s) for s in sigma)
    n = len(sigma)
    even = E_sigma(sigma)
    m = 2  # minimal admissible m_n, even as required since n is forced
    for j in range(n - 1, -1, -1):
        m += 1
        if j in even and m % 2 == 1:
            m += 1
    return m


def kappa_table(n: int) -> dict[tuple[int, ...], int]:
    """All period lower bounds for caustic-type vectors of length n."""
    return {sigma: kappa_sigma(sigma)
            for sigma in product((0, 1), repeat=n)}


# ---------------------------------------------------------------------------
# planar minimal caustics


def minimal_caustics_2d(a: float, b: float):
    """Caustic parameters of the minimal 3- and 4-periodic planar orbits.

    Returns ``(lam_E, lam_H)`` where ``lam_E`` is the ellipse caustic of
    the triangular orbits and ``lam_H`` the hyperbola caustic of the
    4-periodic orbits closing after 2 bounces up to central symmetry;
    ``lam_H`` is ``None`` when ``b >= a/2``, in which case it would fall
    outside the caustic interval.
    """
    if not 0.0 < b < a:
        raise ValueError("semiaxes must satisfy 0 < b < a")
    lam_e = 3.0 * a * b / (a + b + 2.0 * np.sqrt(a * a - a * b + b * b))
    lam_h = a * b / (a - b) if b < 0.5 * a else None
    return lam_e, lam_h
