"""The frequency map, rotation numbers, and the extension to the boundary.

Interior frequencies solve the linear system

    K_0 + 2 sum_{j=1}^n (-1)^j omega_j K_j = 0

for the columns ``K_j`` of the hyperelliptic integral table.  On the
boundary of the caustic space the map extends continuously; the closed
edge formulas for n <= 2 are expressed through the planar rotation
number ``rho(lambda; b, a)`` and the auxiliary functions ``nu_x``,
``nu_y``, ``nu_z`` defined by pole-weighted integral identities.

Near the singular value ``lambda = b`` the rotation number behaves like
``1/2 + kappa_S / log|b - lambda|``, so caustics realizing rotation
numbers near 1/2 are exponentially close to ``b``.  The solver
:func:`lambda_pm` therefore works in the logarithm of the gap, using a
sinh substitution that evaluates ``rho(b -/+ eps)`` without ever forming
the catastrophic difference ``b - eps``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    NearCollapse,
    NearEndpoint,
    NotInRange,
    SingularParameter,
    SingularSystem,
    UnsupportedDimension,
)
from .geometry import CausticParam, Ellipsoid
from .quadrature import (
    DEFAULT_CONFIG,
    CollapseConfig,
    QuadratureConfig,
    collapse_config,
    integral_table,
    singular_integral,
)

__all__ = [
    "Frequency",
    "EdgePoint",
    "frequency",
    "rotation_number_2d",
    "rotation_number_ext",
    "varrho",
    "extended_frequency",
    "classify_edge",
    "nu_x",
    "nu_y",
    "nu_z",
    "kappa_G",
    "rho_geodesic",
    "kappa_S_2d",
    "lambda_pm",
    "LambdaPM",
    "jacobian",
    "normalized_jacobian",
]


@dataclass(frozen=True)
class Frequency:
    """A frequency vector with the provenance of its evaluation."""

    omega: tuple[float, ...]
    source: str  # "interior-quadrature", "edge-formula", or "asymptotic"
    residual: float = 0.0

    def __iter__(self):
        return iter(self.omega)

    def __getitem__(self, k):
        return self.omega[k]

    @property
    def n(self) -> int:
        return len(self.omega)


# ---------------------------------------------------------------------------
# interior frequency


def _solve_system(table_K: np.ndarray) -> tuple[np.ndarray, float]:
    """Solve ``K_0 + 2 sum (-1)^j omega_j K_j = 0`` for omega."""
    n = table_K.shape[0]
    K0 = table_K[:, 0]
    M = np.empty((n, n))
    for j in range(1, n + 1):
        M[:, j - 1] = 2.0 * ((-1) ** j) * table_K[:, j]
    try:
        omega = np.linalg.solve(M, -K0)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    residual = float(np.linalg.norm(K0 + M @ omega) / np.linalg.norm(K0))
    if residual > 1e-11:
        raise SingularSystem(f"frequency system residual {residual:.3e}")
    return omega, residual


def frequency(e: Ellipsoid, lam, config: QuadratureConfig = DEFAULT_CONFIG,
              ) -> Frequency:
    """Frequency vector of the Liouville torus with caustic parameters lam.

    Raises :class:`NearCollapse` when some gap of the merged configuration
    is below ``gap_min``; callers should then use
    :func:`extended_frequency` or the collapse expansions.
    """
    cc = collapse_config(e, lam)
    if cc.min_gap() < config.gap_min(cc.scale):
        raise NearCollapse(
            f"minimum gap {cc.min_gap():.3e} below gap_min; "
            "use extended_frequency")
    table = integral_table(cc, config)
    omega, residual = _solve_system(table.K)
    return Frequency(tuple(omega), "interior-quadrature", residual)


# ---------------------------------------------------------------------------
# planar rotation number


def rotation_number_2d(lam: float, b: float, a: float,
                       config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Rotation number of the planar billiard with caustic parameter lam.

    ``rho = int_0^min(b,lam) ds/sqrt(T) / (2 int_max(b,lam)^a ds/sqrt(T))``
    with ``T(s) = (lam - s)(b - s)(a - s)``.
    """
    if not 0.0 < b < a:
        raise ValueError("need 0 < b < a")
    tol = 1e-14 * a
    if lam <= tol or abs(lam - b) <= tol or lam >= a - tol:
        raise SingularParameter(
            f"lambda = {lam} is singular; use rotation_number_ext")
    if not 0.0 < lam < a:
        raise ValueError("lambda outside (0, a)")
    if abs(lam - b) < 1e-6 * a:
        # logarithmic regime: evaluate through the boundary-layer form
        return _rho_near_b(float(np.log(abs(lam - b))), b, a,
                           "E" if lam < b else "H")
    roots = [lam, b, a]
    num = singular_integral(roots, 0.0, min(b, lam), config=config)
    den = singular_integral(roots, max(b, lam), a, config=config)
    return num / (2.0 * den)


def varrho(beta: float, alpha: float) -> float:
    """The limit rotation number with ``sin^2(pi varrho) = beta/alpha``."""
    if not 0.0 < beta < alpha:
        raise ValueError("need 0 < beta < alpha")
    return float(np.arcsin(np.sqrt(beta / alpha)) / np.pi)


def rotation_number_ext(lam: float, b: float, a: float,
                        config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Rotation number extended continuously to ``lam in {0, b, a}``."""
    tol = 1e-12 * a
    if abs(lam) <= tol:
        return 0.0
    if abs(lam - b) <= tol:
        return 0.5
    if abs(lam - a) <= tol:
        return varrho(b, a)
    return rotation_number_2d(lam, b, a, config)


def kappa_S_2d(b: float, a: float) -> float:
    """Coefficient of the logarithmic approach to 1/2: ``cosh^2 kS = a/b``."""
    if not 0.0 < b < a:
        raise ValueError("need 0 < b < a")
    return float(np.arccosh(np.sqrt(a / b)))


# ---------------------------------------------------------------------------
# rho(b -/+ eps) without cancellation (sinh substitution)


@lru_cache(maxsize=64)
def _gl_cached(order: int):
    return np.polynomial.legendre.leggauss(order)


def _gl(f, lo: float, hi: float, order: int = 256) -> float:
    x, w = _gl_cached(order)
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return half * float(np.dot(w, f(mid + half * x)))


def _layer_integral(log_eps: float, upper: float, g) -> float:
    """``int_0^upper du / sqrt(u (u + eps) g(u))`` for eps = exp(log_eps).

    Uses ``u = eps sinh^2(v/2)`` so that ``du / sqrt(u(u+eps)) = dv``;
    valid for eps far below the representable floor since ``u`` is formed
    as ``exp(log_eps + 2 log sinh(v/2))``.  ``g`` must be smooth and
    positive on ``[0, upper]``.
    """
    # v_max with eps sinh^2(v/2) = upper
    v_max = 2.0 * np.arcsinh(np.exp(0.5 * (np.log(upper) - log_eps)))

    def integrand(v):
        v = np.asarray(v)
        with np.errstate(over="ignore", under="ignore"):
            lu = log_eps + 2.0 * np.log(np.sinh(np.maximum(v, 1e-300) / 2.0))
            u = np.where(lu < -700.0, 0.0, np.exp(np.minimum(lu, 700.0)))
        return 1.0 / np.sqrt(g(np.minimum(u, upper)))

    return _gl(integrand, 0.0, v_max, order=512)


def _sqrt_endpoint_integral(upper: float, g) -> float:
    """``int_0^upper du / sqrt((upper - u) g(u))`` with smooth positive g."""
    w_max = np.sqrt(upper)

    def integrand(w):
        u = upper - w * w
        return 2.0 / np.sqrt(g(np.clip(u, 0.0, upper)))

    return _gl(integrand, 0.0, w_max, order=512)


def _rho_near_b(log_eps: float, b: float, a: float, side: str) -> float:
    """``rho(b - eps)`` (side "E") or ``rho(b + eps)`` (side "H")."""
    d = a - b
    eps = np.exp(log_eps) if log_eps > -700 else 0.0
    if side == "E":
        # numerator over (0, lam), lam = b - eps: u = lam - s
        num = _layer_integral(log_eps, b - eps, lambda u: d + eps + u)
        # denominator over (b, a): u = s - b, integrand 1/sqrt(u(u+eps)(d-u))
        den_lo = _layer_integral(log_eps, d / 2, lambda u: d - u)
        den_hi = _sqrt_endpoint_integral(
            d / 2, lambda w_u: (d / 2 + w_u) * (d / 2 + w_u + eps))
        den = den_lo + den_hi
    elif side == "H":
        # numerator over (0, b): u = b - s
        num = _layer_integral(log_eps, b, lambda u: d + u)
        # denominator over (lam, a), lam = b + eps: u = s - lam
        top = d - eps
        den_lo = _layer_integral(log_eps, top / 2, lambda u: top - u)
        den_hi = _sqrt_endpoint_integral(
            top / 2, lambda w_u: (top / 2 + w_u) * (top / 2 + w_u + eps))
        den = den_lo + den_hi
    else:
        raise ValueError("side must be 'E' or 'H'")
    return num / (2.0 * den)


def _log_constants_near_b(b: float, a: float) -> tuple[float, float]:
    """Constants (eta*, mu*) of ``rho(b - eps) ~ (-log eps + mu*)/(2(-log eps + eta*))``.

    Closed forms: ``eta* = log(16 (a-b))`` and
    ``mu* = log(16 b (a-b) / (sqrt(a) + sqrt(a-b))^2)``; their difference
    is ``2 kappa_S``.
    """
    d = a - b
    eta_star = np.log(16.0 * d)
    mu_star = np.log(16.0 * b * d / (np.sqrt(a) + np.sqrt(d)) ** 2)
    return float(eta_star), float(mu_star)


@dataclass(frozen=True)
class LambdaPM:
    """Solution of ``rho(lambda) = rho0`` on both sides of ``b``.

    ``gap_minus = b - lam_minus`` and ``gap_plus = lam_plus - b`` are
    reported separately (and in logarithm) because near ``rho0 = 1/2``
    they fall below the resolution of the difference of two doubles.
    """

    lam_minus: float
    lam_plus: float | None
    gap_minus: float
    gap_plus: float | None
    log_gap_minus: float
    log_gap_plus: float | None
    asym_minus: float
    asym_plus: float


def lambda_pm(rho0: float, b: float, a: float) -> LambdaPM:
    """Caustic parameters realizing a prescribed rotation number.

    ``lam_minus`` solves ``rho = rho0`` among confocal ellipses (requires
    ``0 < rho0 < 1/2``), ``lam_plus`` among confocal hyperbolas (requires
    ``varrho(b, a) < rho0 < 1/2``, else :class:`NotInRange`).  The
    asymptotic predictions ``b -/+ 16(a-b) exp(-kS/(1/2 - rho0))`` are
    returned alongside.
    """
    if not 0.0 < rho0 < 0.5:
        raise ValueError("need 0 < rho0 < 1/2")
    kS = kappa_S_2d(b, a)
    d = a - b
    asym_gap = 16.0 * d * np.exp(-kS / (0.5 - rho0))

    def solve(side: str) -> float:
        """Return log of the gap solving rho = rho0 on the given side."""
        # Bracket in t = log(gap).  rho -> 1/2 as t -> -inf on both sides.
        t_hi = np.log((1.0 - 1e-9) * (b if side == "E" else d))
        t_lo = np.log(asym_gap) - 40.0

        def f(t):
            return _rho_near_b(t, b, a, side) - rho0

        f_hi, f_lo = f(t_hi), f(t_lo)
        if f_hi * f_lo > 0:
            raise NotInRange(
                f"rho0 = {rho0} not bracketed on side {side}")
        for _ in range(200):
            t_mid = 0.5 * (t_lo + t_hi)
            f_mid = f(t_mid)
            if f_mid == 0.0:
                return t_mid
            if f_mid * f_lo < 0:
                t_hi, f_hi = t_mid, f_mid
            else:
                t_lo, f_lo = t_mid, f_mid
            if abs(t_hi - t_lo) < 1e-12 * max(1.0, abs(t_mid)):
                break
        return 0.5 * (t_lo + t_hi)

    t_minus = solve("E")
    gap_minus = float(np.exp(t_minus))
    lam_minus = b - gap_minus

    if rho0 > varrho(b, a):
        t_plus = solve("H")
        gap_plus = float(np.exp(t_plus))
        lam_plus = b + gap_plus
        log_gap_plus = float(t_plus)
    else:
        gap_plus = lam_plus = log_gap_plus = None

    return LambdaPM(lam_minus, lam_plus, gap_minus, gap_plus,
                    float(t_minus), log_gap_plus,
                    b - asym_gap, b + asym_gap)


# ---------------------------------------------------------------------------
# nu functions (n = 2, semiaxes c < b < a)


def _axes3(e_or_axes) -> tuple[float, float, float]:
    if isinstance(e_or_axes, Ellipsoid):
        if e_or_axes.n != 2:
            raise UnsupportedDimension("nu functions require n = 2")
        c, b, a = e_or_axes.semiaxes
    else:
        c, b, a = sorted(float(v) for v in e_or_axes)
    return c, b, a


def rho_x(lam: float, c: float, b: float, a: float, **kw) -> float:
    """Rotation number of the planar section by the plane of the two
    shorter axes (semiaxes c < b)."""
    return rotation_number_ext(lam, c, b, **kw)


def rho_y(lam: float, c: float, b: float, a: float, **kw) -> float:
    """Section by the plane of the shortest and longest axes (c < a)."""
    return rotation_number_ext(lam, c, a, **kw)


def rho_z(lam: float, c: float, b: float, a: float, **kw) -> float:
    """Section by the plane of the two longer axes (b < a)."""
    return rotation_number_ext(lam, b, a, **kw)


def nu_x(lam: float, c: float, b: float, a: float,
         config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Second frequency component on the edge ``lambda_2 = a``.

    Solves ``I - 2 rho_x(lam) J + 2 pi nu_x / sqrt(-T_x(a)) = 0`` with
    ``T_x(s) = (lam - s)(c - s)(b - s)``.  Near the endpoints
    ``{0, c, b}`` the continuous limit value is returned.
    """
    gap = config.gap_min(a)
    if lam <= gap:
        return 0.0
    if abs(lam - c) <= gap:
        return varrho(b, a)  # rho_z(a)
    if lam >= b - gap:
        return varrho(c, a)  # rho_y(a)
    if not 0.0 < lam < b:
        raise ValueError("nu_x needs lambda in (0, b)")
    m_lo, m_hi = min(lam, c), max(lam, c)
    roots = [lam, c, b]
    I = singular_integral(roots, 0.0, m_lo, pole=a, config=config)
    J = singular_integral(roots, m_hi, b, pole=a, config=config)
    rx = rotation_number_2d(lam, c, b, config)
    root_T = np.sqrt((a - lam) * (a - c) * (a - b))
    return float((2.0 * rx * J - I) * root_T / (2.0 * np.pi))


def nu_y(lam: float, c: float, b: float, a: float,
         config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """First frequency component on the edge ``lambda_1 = b``.

    Solves ``I + 2 rho_y(lam) J - 2 pi nu_y / sqrt(-T_y(b)) = 0`` with
    ``T_y(s) = (c - s)(lam - s)(a - s)`` and ``lam in (b, a)``.
    """
    gap = config.gap_min(a)
    if abs(lam - b) <= gap:
        return rotation_number_ext(c, b, a)  # rho_z(c)
    if lam >= a - gap:
        return varrho(c, b)  # rho_x(b)
    if not b < lam < a:
        raise ValueError("nu_y needs lambda in (b, a)")
    roots = [c, lam, a]
    I = singular_integral(roots, 0.0, c, pole=b, config=config)
    J = singular_integral(roots, lam, a, pole=b, pole_abs=True, config=config)
    ry = rotation_number_2d(lam, c, a, config)
    root_T = np.sqrt((b - c) * (lam - b) * (a - b))
    return float((I + 2.0 * ry * J) * root_T / (2.0 * np.pi))


def nu_z(lam: float, c: float, b: float, a: float,
         config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """First frequency component on the edge ``lambda_2 = c`` and the
    diagonal ``lambda_1 = lambda_2``.

    Solves ``I + 2 rho_z(min(lam,c)) J - 2 pi nu_z / sqrt(-T_z(m))`` with
    ``T_z(s) = (min(lam,c) - s)(b - s)(a - s)`` and ``m = max(lam, c)``.
    """
    gap = config.gap_min(a)
    if lam <= gap:
        return 0.0
    if abs(lam - c) <= gap:
        return 0.5
    if lam >= b - gap:
        return rotation_number_ext(c, b, a)  # rho_z(c)
    if not 0.0 < lam < b:
        raise ValueError("nu_z needs lambda in (0, b)")
    m_lo, m_hi = min(lam, c), max(lam, c)
    roots = [m_lo, b, a]
    I = singular_integral(roots, 0.0, m_lo, pole=m_hi, config=config)
    J = singular_integral(roots, b, a, pole=m_hi, pole_abs=True, config=config)
    rz = rotation_number_2d(m_lo, b, a, config)
    root_T = np.sqrt((m_hi - m_lo) * (b - m_hi) * (a - m_hi))
    return float((I + 2.0 * rz * J) * root_T / (2.0 * np.pi))


# ---------------------------------------------------------------------------
# geodesic limit


def kappa_G(e: Ellipsoid, lam_tail=(),
            config: QuadratureConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Leading coefficient of ``omega = kappa_G sqrt(lambda_1) + O(lambda_1^{3/2})``.

    ``lam_tail`` holds the remaining caustic parameters
    ``(lambda_2, ..., lambda_n)`` of the geodesic limit.  Solves the
    geodesic linear system whose radicand is ``s`` times the product over
    the merged semiaxes and tail caustics.
    """
    n = e.n
    tail = tuple(float(v) for v in lam_tail)
    if len(tail) != n - 1:
        raise ValueError(f"expected {n - 1} tail caustic values")
    merged = sorted(list(e.semiaxes) + list(tail))
    roots = [0.0] + merged
    # K^G_0 = (2 / sqrt(prod of merged entries), 0, ..., 0)
    K0 = np.zeros(n)
    K0[0] = 2.0 / np.sqrt(np.prod(merged))
    # intervals j = 1..n of the c-vector (0, merged...): (merged[2j-2], merged[2j-1])
    M = np.empty((n, n))
    for j in range(1, n + 1):
        lo, hi = merged[2 * j - 2], merged[2 * j - 1]
        for i in range(n):
            Kij = singular_integral(roots, lo, hi, i=i, config=config)
            M[i, j - 1] = 2.0 * ((-1) ** j) * Kij
    kappa = np.linalg.solve(M, -K0)
    return kappa


def rho_geodesic(lam: float, c: float, b: float, a: float,
                 config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Rotation number of the geodesic flow on the triaxial ellipsoid.

    ``rho_G = int_c^min(b,lam) s ds/sqrt(T_G) / int_max(b,lam)^a s ds/sqrt(T_G)``
    with radicand roots ``{0, c, lam, b, a}``; extended by ``rho_G(b) = 1``.
    """
    if not c < lam < a:
        raise ValueError("lambda outside (c, a)")
    if abs(lam - b) <= 1e-12 * a:
        return 1.0
    roots = [0.0, c, lam, b, a]
    num = singular_integral(roots, c, min(b, lam), i=1, config=config)
    den = singular_integral(roots, max(b, lam), a, i=1, config=config)
    return num / den


# ---------------------------------------------------------------------------
# boundary classification and the extended map (n = 2)


@dataclass(frozen=True)
class EdgePoint:
    """A point of the closure of the caustic space with its edge tag."""

    lam_bar: tuple[float, ...]
    tag: str  # e.g. "G", "R:lam2=b", "S:lam1=c", "diag", "vertex", "interior"


def classify_edge(e: Ellipsoid, lam_bar, tol: float = 1e-12) -> EdgePoint:
    """Classify a closure point of the caustic space (n = 2)."""
    c, b, a = _axes3(e)
    l1, l2 = (float(v) for v in lam_bar)
    t = tol * a
    tags = []
    if l1 <= t:
        tags.append("G")
    if abs(l1 - c) <= t:
        tags.append("S:lam1=c")
    if abs(l1 - b) <= t:
        tags.append("R:lam1=b")
    if abs(l2 - c) <= t:
        tags.append("R:lam2=c")
    if abs(l2 - b) <= t:
        tags.append("S:lam2=b")
    if abs(l2 - a) <= t:
        tags.append("R:lam2=a")
    if abs(l2 - l1) <= t and l1 > t:
        tags.append("diag")
    if not tags:
        tag = "interior"
    elif len(tags) == 1:
        tag = tags[0]
    else:
        tag = "vertex:" + "+".join(tags)
    return EdgePoint((l1, l2), tag)


def extended_frequency(e: Ellipsoid, point,
                       config: QuadratureConfig = DEFAULT_CONFIG) -> Frequency:
    """Continuous extension of the frequency map to the boundary.

    Accepts an :class:`EdgePoint` or a raw caustic vector; dispatches to
    the closed edge formulas when the point lies on (or within
    ``gap_min`` of) the boundary, and to interior quadrature otherwise.
    Closed edge tables are implemented for n <= 2.
    """
    if e.n == 1:
        lam = float(point.lam_bar[0]) if isinstance(point, EdgePoint) \
            else float(np.atleast_1d(point)[0])
        b, a = e.semiaxes
        return Frequency((rotation_number_ext(lam, b, a, config),),
                         "edge-formula")
    if e.n != 2:
        raise UnsupportedDimension(
            "closed edge formulas are implemented for n <= 2")
    c, b, a = e.semiaxes
    if isinstance(point, EdgePoint):
        l1, l2 = point.lam_bar
    else:
        l1, l2 = (float(v) for v in point)
    t = config.gap_min(a)

    def F(w1, w2, src="edge-formula"):
        return Frequency((float(w1), float(w2)), src)

    if l1 <= t:
        return F(0.0, 0.0)
    if abs(l2 - b) <= t:
        r = rho_y(l1, c, b, a, config=config)
        return F(r, r)
    if abs(l1 - c) <= t:
        return F(0.5, rho_z(l2, c, b, a, config=config))
    if abs(l2 - a) <= t:
        return F(rho_x(l1, c, b, a, config=config), nu_x(l1, c, b, a, config))
    if abs(l1 - b) <= t:
        return F(nu_y(l2, c, b, a, config), rho_y(l2, c, b, a, config=config))
    if abs(l2 - c) <= t:
        return F(nu_z(l1, c, b, a, config), rho_z(l1, c, b, a, config=config))
    if abs(l2 - l1) <= t:
        return F(nu_z(l1, c, b, a, config), rho_z(c, c, b, a, config=config))
    # interior: fall back to quadrature, with the geodesic expansion when
    # lambda_1 is small but positive
    cc = collapse_config(e, (l1, l2))
    if cc.min_gap() >= config.gap_min(cc.scale):
        f = frequency(e, (l1, l2), config)
        return Frequency(f.omega, "interior-quadrature", f.residual)
    if l1 < 1e-6 * a:
        kap = kappa_G(e, (l2,), config)
        return Frequency(tuple(kap * np.sqrt(l1)), "asymptotic")
    raise NearCollapse("near-collapse interior point without closed expansion")


# ---------------------------------------------------------------------------
# Jacobian diagnostics


def jacobian(e: Ellipsoid, lam, config: QuadratureConfig = DEFAULT_CONFIG,
             ) -> np.ndarray:
    """Richardson-extrapolated central-difference Jacobian of omega(lambda)."""
    lam = np.asarray(lam, dtype=float)
    n = e.n
    cc = collapse_config(e, lam)
    local_gap = cc.min_gap()
    if local_gap < 10 * config.gap_min(cc.scale):
        raise NearCollapse("lambda too close to a collapse for differencing")
    h0 = 1e-5 * local_gap
    J = np.empty((n, n))

    def omega_at(v):
        return np.asarray(frequency(e, v, config).omega)

    for j in range(n):
        ej = np.zeros(n)
        ej[j] = 1.0

        def D(h):
            return (omega_at(lam + h * ej) - omega_at(lam - h * ej)) / (2 * h)

        d1 = D(h0)
        d2 = D(h0 / 2.0)
        J[:, j] = (4.0 * d2 - d1) / 3.0
    return J


def normalized_jacobian(e: Ellipsoid, lam,
                        config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``J_* = (1 - exp(-|det J|))^{1/4}``, a [0,1) nondegeneracy score."""
    det = abs(float(np.linalg.det(jacobian(e, lam, config))))
    return float((1.0 - np.exp(-det)) ** 0.25)
