"""Exception types shared across the package."""

from __future__ import annotations


class CapacityError(Exception):
    """An input exceeds a hard size bound of an exact algorithm."""


class ConstructionError(Exception):
    """A constructed witness arrangement failed its certifying check."""


class ExtractionError(Exception):
    """No spanning path could be read off an arrangement.

    Carries the structure that broke: ``reason`` is a short tag
    ("missing out-arc", "branching", "multiple in-arcs", "cycle",
    "not a source path"), ``vertex`` the offending 1-based vertex when
    there is one, and ``arcs`` the adjacency arcs that were found.
    """

    def __init__(
        self,
        message: str,
        *,
        reason: str,
        vertex: int | None = None,
        arcs: tuple[tuple[int, int], ...] = (),
    ) -> None:
        super().__init__(message)
        self.reason = reason
        self.vertex = vertex
        self.arcs = tuple(arcs)
