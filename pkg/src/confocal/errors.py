"""Exception hierarchy for the confocal billiard library.

All domain and numerical errors raised by the library derive from
:class:`ConfocalError`, so callers can catch library failures with a
single except clause while still distinguishing the specific condition.
"""

from __future__ import annotations


class ConfocalError(Exception):
    """Base class for all library errors."""


# ---------------------------------------------------------------------------
# geometry


class DegenerateChord(ConfocalError):
    """A billiard chord is shorter than the grazing threshold.

    Raised when the positive intersection parameter of a ray with the
    ellipsoid falls below ``mu_min``, signalling a tangent or grazing ray.
    """

    def __init__(self, message: str = "", step: int | None = None):
        super().__init__(message or "degenerate (grazing) chord")
        self.step = step


class SingularCaustic(ConfocalError):
    """A caustic parameter coincides with a semiaxis or another caustic."""


class OutsideAnnulus(ConfocalError):
    """A 2D Birkhoff coordinate pair lies outside the phase annulus."""


# ---------------------------------------------------------------------------
# quadrature


class CollapsedInterval(ConfocalError):
    """An integration interval is shorter than ``gap_min``.

    The caller should route the evaluation to the asymptotic expansions.
    """


class NonConvergent(ConfocalError):
    """Adaptive quadrature refinement stalled before reaching tolerance."""


class PoleTooClose(ConfocalError):
    """A weight pole sits within ``pole_min`` of the integration interval."""


# ---------------------------------------------------------------------------
# frequency


class NearCollapse(ConfocalError):
    """A caustic configuration is too close to a collapse for direct quadrature."""


class SingularSystem(ConfocalError):
    """The frequency linear system is numerically singular (fatal diagnostic)."""


class SingularParameter(ConfocalError):
    """A rotation-number argument sits at a singular value (0, b, or a)."""


class NearEndpoint(ConfocalError):
    """A nu-function argument is within ``gap_min`` of a domain endpoint."""


class UnsupportedDimension(ConfocalError):
    """A closed edge formula was requested outside the supported dimension."""


# ---------------------------------------------------------------------------
# asymptotics


class KindMismatch(ConfocalError):
    """The gap structure of a configuration contradicts the declared collapse kind."""


# ---------------------------------------------------------------------------
# periodic


class NotClosed(ConfocalError):
    """An orbit does not close within the closure tolerance."""


class AmbiguousCount(ConfocalError):
    """A winding-count event lies too close to a segment endpoint."""


class NotInRange(ConfocalError):
    """A target frequency lies outside the range of the frequency map."""


class NoConvergence(ConfocalError):
    """A Newton iteration failed to converge."""


# ---------------------------------------------------------------------------
# bifurcation


class EmptySlice(ConfocalError):
    """A parameter-space slice contains no membership transition."""
