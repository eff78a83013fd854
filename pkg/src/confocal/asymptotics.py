"""Endpoint and collapse expansions of the hyperelliptic integrals.

Three elementary expansion lemmas cover every degeneration of the
integrals: a square-root endpoint detaching from the interval (order
``sqrt(eps)``), a shrinking interval between two simple roots (order
``eps``), and two roots merging across an interval boundary (order
``1/log(eps)``).  The constants of the logarithmic expansions are
computed by quadrature of the regularized (subtract-the-singularity)
integrands exactly as they appear in the lemma statements.

The collapse expansions of the frequency map combine these lemmas with
the reduced lower-dimensional frequency systems: a collapsed interval
freezes one frequency component at a value fixed by a pole-weighted
integral condition, a singular merge sends one component to 1/2 (or to
its neighbour), and the total collapses have closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .errors import KindMismatch
from .frequency import Frequency, _solve_system
from .quadrature import (
    DEFAULT_CONFIG,
    CollapseConfig,
    QuadratureConfig,
    integral_table,
    singular_integral,
)

__all__ = [
    "CollapseKind",
    "detect_kind",
    "lemma_G_expand",
    "lemma_R_expand",
    "lemma_S_expand",
    "corollary_S_leading",
    "collapse_frequency",
    "perturbation_solve",
]

_MP_DPS = 30


def _mp_quad(f, lo, hi, exact: bool = False) -> float:
    # By default nodes are handed to f as plain floats so numpy-based
    # integrands work.  With ``exact=True`` the nodes stay in working
    # precision, which matters when f suffers float cancellation near an
    # endpoint (it must then accept mpmath numbers).
    with mp.workdps(_MP_DPS):
        if exact:
            return float(mp.quad(f, [lo, hi]))
        return float(mp.quad(lambda s: float(f(float(s))), [lo, hi]))


# ---------------------------------------------------------------------------
# expansion lemmas


def lemma_G_expand(f, eps: float, check: bool = False):
    """Leading term of ``int_0^eps f(s) ds / sqrt(eps - s)``.

    Returns ``2 f(0) sqrt(eps)``; with ``check=True`` returns the triple
    ``(numeric integral, leading term, ratio)`` where the integral is
    evaluated through the substitution ``s = eps - w^2``.
    """
    leading = 2.0 * float(f(0.0)) * np.sqrt(eps)
    if not check:
        return leading
    integral = _mp_quad(lambda w: 2.0 * f(eps - w * w), 0.0, np.sqrt(eps))
    return integral, leading, integral / leading


def lemma_R_expand(f, alpha: float, beta: float, check: bool = False):
    """Leading term of ``int_alpha^beta f(s) ds / sqrt((s-alpha)(beta-s))``.

    Returns ``pi f(alpha)``; with ``check=True`` also evaluates the
    integral numerically via the midpoint sine substitution.
    """
    leading = np.pi * float(f(alpha))
    if not check:
        return leading
    m, h = 0.5 * (alpha + beta), 0.5 * (beta - alpha)
    integral = _mp_quad(lambda t: f(m + h * mp.sin(t)),
                        -mp.pi / 2, mp.pi / 2)
    return integral, leading, integral / leading


def lemma_S_expand(f, alpha: float, beta: float, eps: float,
                   variant: str, exact: bool = False) -> tuple[float, float]:
    """Leading term and constant of the four merging-root estimates.

    ``variant`` selects the integral:

    - ``"log-left"``:  ``int f / sqrt((s+eps-alpha)(s-alpha))``
      = ``-f(alpha) log(eps) + eta + O(eps log eps)``
    - ``"pole-left"``: ``int f / ((s+eps-alpha) sqrt(s-alpha))``
      = ``pi f(alpha)/sqrt(eps) + xi + O(sqrt(eps))``
    - ``"log-right"``: ``int f / sqrt((beta+eps-s)(beta-s))``
      = ``-f(beta) log(eps) + mu + O(eps log eps)``
    - ``"pole-right"``: ``int f / ((beta+eps-s) sqrt(beta-s))``
      = ``pi f(beta)/sqrt(eps) + psi + O(sqrt(eps))``

    Returns ``(leading, constant)``.  The constants are quadratures of
    the regularized integrands, which tolerate an integrable singularity
    of ``f`` at the opposite endpoint.  With ``exact=True`` the
    quadrature nodes are kept in extended precision and handed to ``f``
    unconverted; use this when ``f`` is singular at the opposite
    endpoint, where forming the endpoint distance in double precision
    loses all digits (``f`` must then accept mpmath arguments).
    """
    def quotient(value_at, power):
        # difference quotient with a zero-guard: when a node rounds onto
        # the subtraction endpoint both numerator and denominator vanish
        # and the correct limit contribution is 0 under the w^2 change
        def q(s):
            d = s - alpha if value_at == "left" else beta - s
            if d <= 0.0:
                return 0.0
            ref = fa if value_at == "left" else fb
            return (f(s) - ref) / d ** power
        return q

    # The pole variants pick up an extra constant -2 f(endpoint) /
    # sqrt(beta - alpha) from the closed-form arctangent integral of the
    # frozen-numerator part; it must be included for the stated O(sqrt(eps))
    # remainder to hold (verified numerically against exact f).
    if variant == "log-left":
        fa = float(f(alpha))
        const = fa * np.log(4.0 * (beta - alpha)) + _reg_integral(
            quotient("left", 1.0), alpha, beta, exact)
        return -fa * np.log(eps), const
    if variant == "pole-left":
        fa = float(f(alpha))
        const = (_reg_integral(quotient("left", 1.5), alpha, beta, exact)
                 - 2.0 * fa / np.sqrt(beta - alpha))
        return np.pi * fa / np.sqrt(eps), const
    if variant == "log-right":
        fb = float(f(beta))
        const = fb * np.log(4.0 * (beta - alpha)) + _reg_integral(
            quotient("right", 1.0), alpha, beta, exact)
        return -fb * np.log(eps), const
    if variant == "pole-right":
        fb = float(f(beta))
        const = (_reg_integral(quotient("right", 1.5), alpha, beta, exact)
                 - 2.0 * fb / np.sqrt(beta - alpha))
        return np.pi * fb / np.sqrt(eps), const
    raise ValueError(f"unknown variant {variant!r}")


def _reg_integral(h, alpha: float, beta: float, exact: bool = False) -> float:
    """Integrate a quotient integrand with algebraic endpoint behavior.

    Splits at the midpoint and applies ``s = alpha + w^2`` on the left
    half and ``s = beta - w^2`` on the right half, which removes both the
    0/0 corner of the subtracted singularity and any inverse-square-root
    blow-up that the relaxation clause of the merging-root lemma allows
    at the opposite endpoint.
    """
    m = 0.5 * (alpha + beta)

    def left(w):
        if w <= 0.0:
            return 0.0
        return 2.0 * w * h(alpha + w * w)

    def right(w):
        if w <= 0.0:
            return 0.0
        return 2.0 * w * h(beta - w * w)

    half = np.sqrt(m - alpha)
    if exact:
        # Extended precision keeps ``beta - w*w`` (and hence the distance
        # to the singular endpoint seen by the integrand) accurate down to
        # node distances ~1e-60, far below where the tanh-sinh weights
        # make the tail contribution negligible.
        # The lower limit is floored at 1e-25: the integrands are bounded
        # there, so the dropped tail is O(1e-25), while the floor keeps
        # ``w*w`` resolvable against the endpoints at 60 digits.
        with mp.workdps(60):
            return float(mp.quad(left, [mp.mpf("1e-25"), half])
                         + mp.quad(right, [mp.mpf("1e-25"), half]))
    return _mp_quad(left, 0.0, half) + _mp_quad(right, 0.0, half)


def corollary_S_leading(f, alpha_star: float, beta_star: float,
                        eps1: float, eps2: float) -> float:
    """Double-sided leading term of the two-pair merging integral.

    ``-(f(alpha*) log eps1 + f(beta*) log eps2) / (beta* - alpha*)``.
    """
    return -(float(f(alpha_star)) * np.log(eps1)
             + float(f(beta_star)) * np.log(eps2)) / (beta_star - alpha_star)


# ---------------------------------------------------------------------------
# collapse kinds


@dataclass(frozen=True)
class CollapseKind:
    """Which degeneration a configuration is approaching.

    ``kind`` is one of ``"geodesic"`` (first entry to 0),
    ``"simple-regular"`` (interval ``(c_{2l}, c_{2l+1})`` shrinking),
    ``"simple-singular"`` (gap ``(c_{2l-1}, c_{2l})`` shrinking),
    ``"total-regular"``, or ``"total-singular"``; ``l`` indexes the
    collapsing pair where applicable (1-based).
    """

    kind: str
    l: int | None = None


def detect_kind(c: CollapseConfig, threshold: float | None = None) -> CollapseKind:
    """Classify the smallest gap of a configuration into a collapse kind."""
    gaps = c.gaps()  # gaps[0] = c_1 - 0, gaps[k] = c_{k+1} - c_k
    thr = threshold if threshold is not None else 1e-4 * c.scale
    small = [k for k, g in enumerate(gaps) if g < thr]
    if not small:
        raise KindMismatch("no gap below the collapse threshold")
    if small == [0]:
        return CollapseKind("geodesic")
    # gap k >= 1 lies between c_k and c_{k+1} (1-based entries)
    interval_like = [k for k in small if k >= 1 and k % 2 == 0]
    merge_like = [k for k in small if k >= 1 and k % 2 == 1]
    n = c.n
    if len(interval_like) == n and not merge_like and 0 not in small:
        return CollapseKind("total-regular")
    if len(merge_like) == n and not interval_like:
        return CollapseKind("total-singular")
    if len(small) == 1:
        k = small[0]
        if k % 2 == 0:
            return CollapseKind("simple-regular", k // 2)
        return CollapseKind("simple-singular", (k + 1) // 2)
    raise KindMismatch(f"ambiguous collapse pattern at gaps {small}")


# ---------------------------------------------------------------------------
# collapse expansions of the frequency map


def _reduced_frequency(c_reduced: tuple[float, ...],
                       config: QuadratureConfig) -> np.ndarray:
    cc = CollapseConfig(c_reduced)
    table = integral_table(cc, config)
    omega, _ = _solve_system(table.K)
    return omega


def collapse_frequency(c: CollapseConfig, kind: CollapseKind,
                       config: QuadratureConfig = DEFAULT_CONFIG) -> Frequency:
    """Limit frequency of a collapsing configuration.

    Returns the expansion's limit value (with the first-order coefficient
    folded in for the geodesic case, where it is available in closed
    form).  Raises :class:`KindMismatch` when the gap structure of ``c``
    contradicts the declared kind.
    """
    n = c.n
    cs = c.c
    gaps = c.gaps()
    loose = 1e-3 * c.scale

    if kind.kind == "geodesic":
        if gaps[0] >= loose:
            raise KindMismatch("first entry is not small")
        merged = list(cs[1:])
        roots = [0.0] + merged
        K0 = np.zeros(n)
        K0[0] = 2.0 / np.sqrt(np.prod(merged))
        M = np.empty((n, n))
        for j in range(1, n + 1):
            lo, hi = merged[2 * j - 2], merged[2 * j - 1]
            for i in range(n):
                M[i, j - 1] = 2.0 * ((-1) ** j) * singular_integral(
                    roots, lo, hi, i=i, config=config)
        kappa = np.linalg.solve(M, -K0)
        return Frequency(tuple(kappa * np.sqrt(cs[0])), "asymptotic")

    if kind.kind == "simple-regular":
        l = kind.l
        if not 1 <= l <= n or gaps[2 * l] >= loose:
            raise KindMismatch(f"interval {l} is not collapsed")
        c_star = 0.5 * (cs[2 * l - 1] + cs[2 * l])
        reduced = tuple(v for k, v in enumerate(cs)
                        if k not in (2 * l - 1, 2 * l))
        omega = np.empty(n)
        if n > 1:
            om_red = _reduced_frequency(reduced, config)
            for j in range(1, n + 1):
                if j < l:
                    omega[j - 1] = om_red[j - 1]
                elif j > l:
                    omega[j - 1] = om_red[j - 2]
        else:
            om_red = np.empty(0)
        # frozen component from the pole-weighted condition
        red_cc = CollapseConfig(reduced)
        red_roots = list(reduced)
        acc = singular_integral(red_roots, *red_cc.interval(0),
                                pole=c_star, pole_abs=True, config=config)
        for j in range(1, n):
            # reduced interval j corresponds to original interval j if
            # j < l, else to original interval j + 1
            orig_j = j if j < l else j + 1
            acc += (2.0 * ((-1) ** orig_j)
                    * omega[orig_j - 1]
                    * singular_integral(red_roots, *red_cc.interval(j),
                                        pole=c_star, pole_abs=True,
                                        config=config))
        TR = abs(np.prod([r - c_star for r in reduced]))
        omega[l - 1] = -((-1) ** l) * np.sqrt(TR) * acc / (2.0 * np.pi)
        return Frequency(tuple(omega), "asymptotic")

    if kind.kind == "simple-singular":
        l = kind.l
        if not 1 <= l <= n or gaps[2 * l - 1] >= loose:
            raise KindMismatch(f"gap before interval {l} is not collapsed")
        reduced = tuple(v for k, v in enumerate(cs)
                        if k not in (2 * l - 2, 2 * l - 1))
        omega = np.empty(n)
        om_red = _reduced_frequency(reduced, config) if n > 1 else np.empty(0)
        for j in range(1, n + 1):
            if j < l:
                omega[j - 1] = om_red[j - 1]
            elif j > l:
                omega[j - 1] = om_red[j - 2]
        omega[l - 1] = 0.5 if l == 1 else omega[l - 2]
        return Frequency(tuple(omega), "asymptotic")

    if kind.kind == "total-regular":
        if any(gaps[2 * l] >= loose for l in range(1, n + 1)):
            raise KindMismatch("not all intervals are collapsed")
        c1 = cs[0]
        omega = np.empty(n)
        for l in range(1, n + 1):
            c_star = 0.5 * (cs[2 * l - 1] + cs[2 * l])
            omega[l - 1] = np.arcsin(np.sqrt(c1 / c_star)) / np.pi
        return Frequency(tuple(omega), "asymptotic")

    if kind.kind == "total-singular":
        if any(gaps[2 * l - 1] >= loose for l in range(1, n + 1)):
            raise KindMismatch("not all gaps are collapsed")
        return Frequency((0.5,) * n, "asymptotic")

    raise KindMismatch(f"unknown kind {kind.kind!r}")


# ---------------------------------------------------------------------------
# linear-system perturbation


@dataclass(frozen=True)
class PerturbationExpansion:
    """First-order expansion ``omega_eps = omega + eps kappa + o(eps)``."""

    omega: np.ndarray
    kappa: np.ndarray
    condition_number: float


def perturbation_solve(samples) -> PerturbationExpansion:
    """Fit the solutions of a family of linear systems linearly in eps.

    ``samples`` is a list of ``(eps, K_matrix, tau_vector)`` with the
    smallest eps first or in any order; each system is solved directly,
    then a least-squares straight line in eps gives the limit solution
    and its first-order sensitivity.
    """
    eps_list, solutions = [], []
    cond = 0.0
    for eps, K, tau in samples:
        K = np.asarray(K, dtype=float)
        sol = np.linalg.solve(K, np.asarray(tau, dtype=float))
        eps_list.append(float(eps))
        solutions.append(sol)
        cond = max(cond, float(np.linalg.cond(K)))
    eps_arr = np.asarray(eps_list)
    sols = np.asarray(solutions)
    A = np.stack([np.ones_like(eps_arr), eps_arr], axis=1)
    coef, *_ = np.linalg.lstsq(A, sols, rcond=None)
    return PerturbationExpansion(coef[0], coef[1], cond)
