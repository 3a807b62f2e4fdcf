"""Exception types shared across the package.

Input problems (bad files, bad polytopes, bad lattices) and numerical
contract violations get distinct classes so callers can map them to
exit codes without string matching.
"""


class DelzantError(Exception):
    """Base class for every error raised by this package."""


class DegenerateInput(DelzantError):
    """A zero vector or dependent rows where independence is required."""


class Unbounded(DelzantError):
    """The inequality system describes an unbounded polyhedron."""


class EmptyPolytope(DelzantError):
    """The inequality system has no solutions."""


class LowerDimensional(DelzantError):
    """The solution set is not full-dimensional in its ambient space."""


class OutsidePolytope(DelzantError):
    """A point violates a facet inequality; carries the facet index."""

    def __init__(self, facet_index: int, message: str | None = None):
        self.facet_index = facet_index
        super().__init__(message or f"facet {facet_index} violated")


class ResidualTooLarge(DelzantError):
    """A numerical solve left a residual above the allowed tolerance."""


class WrongStratum(DelzantError):
    """The zero pattern of a point does not match the requested face."""


class NegativePowerOfZero(DelzantError):
    """Chart evaluation hit 0**e with e < 0."""


class NotInCone(DelzantError):
    """A lattice vector lies outside the cone it was claimed to be in."""


class NotIncident(DelzantError):
    """The two faces are not related in the face lattice."""


class NotInFiber(DelzantError):
    """The point is not (numerically) in the fiber being solved for."""


class NoIntegerCompletion(DelzantError):
    """The integer completion step failed; indicates an internal bug."""


class DimensionTooLarge(DelzantError):
    """Semigroup enumeration is capped at ambient dimension 4."""


class NotAnOverlattice(DelzantError):
    """The proposed lattice does not contain the current one."""


class InfiniteIndex(DelzantError):
    """The proposed lattice has deficient rank, so the index is infinite."""


class ParseError(DelzantError):
    """An input file failed to parse; message is location-tagged."""
