"""Seat graphs, preferences, arrangements, and the stability checkers.

Agents occupy the vertices of an undirected *seat graph*. An agent's
utility is the sum of its preference values over the occupants of the
adjacent seats. Agent ``i`` *envies* agent ``j`` when ``i``'s utility
would strictly increase if the two swapped seats; a pair that envies
each other is a *blocking pair*. An arrangement is *envy-free* when no
agent envies anyone and *exchange-stable* when it has no blocking pair.

All values here are immutable after construction; every operation is a
pure function of its inputs and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

#: A seat is a 0-based ``(row, col)`` pair on grids, an integer id on
#: explicit graphs.
Seat = tuple[int, int] | int


@dataclass(frozen=True)
class SeatGraph:
    """An ``rows x cols`` grid of seats, or an explicit undirected graph.

    Grid seats are addressed by 0-based ``(row, col)`` and numbered
    row-major (``row * cols + col``); two grid seats are adjacent iff
    they differ by one in exactly one coordinate. Explicit-graph seats
    are integer ids ``0 .. num_seats-1``.
    """

    shape: tuple[int, int] | None
    num_seats: int
    edges: frozenset[tuple[int, int]] | None

    @classmethod
    def grid(cls, rows: int, cols: int) -> "SeatGraph":
        if rows < 1 or cols < 1:
            raise ValueError(f"grid dimensions must be positive, got {rows}x{cols}")
        return cls(shape=(rows, cols), num_seats=rows * cols, edges=None)

    @classmethod
    def explicit(cls, num_vertices: int, edges: Iterable[tuple[int, int]]) -> "SeatGraph":
        if num_vertices < 1:
            raise ValueError("explicit graph needs at least one vertex")
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise ValueError(f"edge ({u},{v}) out of range 0..{num_vertices - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
        return cls(shape=None, num_seats=num_vertices, edges=frozenset(seen))

    @property
    def is_grid(self) -> bool:
        return self.shape is not None

    @property
    def rows(self) -> int:
        if self.shape is None:
            raise ValueError("not a grid")
        return self.shape[0]

    @property
    def cols(self) -> int:
        if self.shape is None:
            raise ValueError("not a grid")
        return self.shape[1]

    def seats(self) -> list[Seat]:
        """All seats in index (row-major) order."""
        if self.shape is not None:
            rows, cols = self.shape
            return [(r, c) for r in range(rows) for c in range(cols)]
        return list(range(self.num_seats))

    def contains(self, seat: Seat) -> bool:
        if self.shape is not None:
            if not (isinstance(seat, tuple) and len(seat) == 2):
                return False
            r, c = seat
            return 0 <= r < self.shape[0] and 0 <= c < self.shape[1]
        return isinstance(seat, int) and not isinstance(seat, bool) and 0 <= seat < self.num_seats

    def _check(self, seat: Seat) -> None:
        if not self.contains(seat):
            raise ValueError(f"seat {seat!r} is not a vertex of this graph")

    def seat_index(self, seat: Seat) -> int:
        """Row-major index of a grid seat, or the id of an explicit seat."""
        self._check(seat)
        if self.shape is not None:
            r, c = seat  # type: ignore[misc]
            return r * self.shape[1] + c
        return seat  # type: ignore[return-value]

    def seat_at(self, index: int) -> Seat:
        if not 0 <= index < self.num_seats:
            raise ValueError(f"seat index {index} out of range")
        if self.shape is not None:
            return divmod(index, self.shape[1])
        return index

    def neighbors(self, seat: Seat) -> set[Seat]:
        """Adjacent seats; computed from coordinates on grids."""
        self._check(seat)
        if self.shape is not None:
            rows, cols = self.shape
            r, c = seat  # type: ignore[misc]
            out = set()
            if r > 0:
                out.add((r - 1, c))
            if r + 1 < rows:
                out.add((r + 1, c))
            if c > 0:
                out.add((r, c - 1))
            if c + 1 < cols:
                out.add((r, c + 1))
            return out
        return set(self._explicit_adjacency[seat])  # type: ignore[index]

    def adjacent(self, a: Seat, b: Seat) -> bool:
        self._check(a)
        self._check(b)
        if self.shape is not None:
            (r1, c1), (r2, c2) = a, b  # type: ignore[misc]
            return abs(r1 - r2) + abs(c1 - c2) == 1
        u, v = (a, b) if a < b else (b, a)  # type: ignore[operator]
        return (u, v) in self.edges  # type: ignore[operator]

    def degree(self, seat: Seat) -> int:
        return len(self.neighbors(seat))

    @cached_property
    def max_degree(self) -> int:
        return max((self.degree(s) for s in self.seats()), default=0)

    @cached_property
    def _explicit_adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in range(self.num_seats)}
        for u, v in self.edges or ():
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    @cached_property
    def neighbor_indices(self) -> tuple[tuple[int, ...], ...]:
        """Neighbors of each seat, by seat index. Hot-path form of neighbors()."""
        return tuple(
            tuple(sorted(self.seat_index(w) for w in self.neighbors(s)))
            for s in self.seats()
        )

    @cached_property
    def _index_automorphisms(self) -> tuple[tuple[int, ...], ...]:
        # Grid symmetries as seat-index permutations: flips and 180 degree
        # rotation always, plus the transpose family on square grids.
        # Explicit graphs get only the identity (no automorphism search).
        if self.shape is None:
            return (tuple(range(self.num_seats)),)
        rows, cols = self.shape
        maps = [
            lambda r, c: (r, c),
            lambda r, c: (r, cols - 1 - c),
            lambda r, c: (rows - 1 - r, c),
            lambda r, c: (rows - 1 - r, cols - 1 - c),
        ]
        if rows == cols:
            maps += [
                lambda r, c: (c, r),
                lambda r, c: (cols - 1 - c, rows - 1 - r),
                lambda r, c: (c, rows - 1 - r),
                lambda r, c: (cols - 1 - c, r),
            ]
        perms = set()
        for f in maps:
            perm = []
            for r in range(rows):
                for c in range(cols):
                    rr, cc = f(r, c)
                    perm.append(rr * cols + cc)
            perms.add(tuple(perm))
        return tuple(sorted(perms))

    def automorphisms(self) -> list[dict[Seat, Seat]]:
        """The grid symmetry group as seat-to-seat maps (identity only for explicit graphs)."""
        seats = self.seats()
        return [
            {seats[i]: seats[perm[i]] for i in range(self.num_seats)}
            for perm in self._index_automorphisms
        ]

    @cached_property
    def orbit_representatives(self) -> frozenset[int]:
        """One least seat index per orbit of the automorphism group."""
        reps = set()
        for i in range(self.num_seats):
            reps.add(min(perm[i] for perm in self._index_automorphisms))
        return frozenset(reps)


@dataclass(frozen=True)
class PreferenceProfile:
    """Per-agent integer preferences over the other agents.

    ``defaults[i]`` applies to every agent not listed in an override for
    ``i``; missing defaults are 0. Stored in normalized form: zero
    defaults and overrides equal to the row default are dropped, so
    profiles that define the same function compare equal.

    Agent names double as identifiers; their position in ``agents`` is
    the dense 0-based index used by array-based code.
    """

    agents: tuple[str, ...]
    defaults: Mapping[str, int] = field(default_factory=dict)
    overrides: Mapping[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        agents = tuple(self.agents)
        if len(set(agents)) != len(agents):
            raise ValueError("agent names must be unique")
        known = set(agents)
        defaults = {}
        for name, value in self.defaults.items():
            if name not in known:
                raise ValueError(f"default for unknown agent {name!r}")
            if value != 0:
                defaults[name] = int(value)
        overrides = {}
        for (i, j), value in self.overrides.items():
            if i not in known or j not in known:
                raise ValueError(f"preference ({i!r}, {j!r}) names an unknown agent")
            if i == j:
                raise ValueError(f"agent {i!r} cannot hold a preference toward itself")
            if value != defaults.get(i, 0):
                overrides[(i, j)] = int(value)
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "defaults", defaults)
        object.__setattr__(self, "overrides", overrides)

    @property
    def n(self) -> int:
        return len(self.agents)

    @cached_property
    def index_of(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.agents)}

    def value(self, i: str, j: str) -> int:
        """The utility agent ``i`` assigns to agent ``j``."""
        if i not in self.index_of or j not in self.index_of:
            raise ValueError(f"unknown agent in ({i!r}, {j!r})")
        if i == j:
            raise ValueError(f"agent {i!r} has no preference toward itself")
        return self.overrides.get((i, j), self.defaults.get(i, 0))

    @property
    def is_binary(self) -> bool:
        """True when every preference value is 0 or 1."""
        values = set(self.defaults.values()) | set(self.overrides.values())
        return values <= {0, 1}

    @cached_property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        """Dense index-addressed preference matrix; the diagonal is 0."""
        idx = self.index_of
        n = len(self.agents)
        rows = [[self.defaults.get(name, 0)] * n for name in self.agents]
        for name, row in zip(self.agents, rows):
            row[idx[name]] = 0
        for (i, j), value in self.overrides.items():
            rows[idx[i]][idx[j]] = value
        return tuple(tuple(row) for row in rows)


@dataclass(frozen=True)
class Arrangement:
    """A bijection from agents to seats."""

    assignment: Mapping[str, Seat]

    def __post_init__(self) -> None:
        assignment = dict(self.assignment)
        seats = set(assignment.values())
        if len(seats) != len(assignment):
            raise ValueError("two agents share a seat")
        object.__setattr__(self, "assignment", assignment)

    @cached_property
    def inverse(self) -> dict[Seat, str]:
        return {seat: name for name, seat in self.assignment.items()}

    @property
    def agents(self) -> tuple[str, ...]:
        return tuple(self.assignment)

    def seat_of(self, agent: str) -> Seat:
        try:
            return self.assignment[agent]
        except KeyError:
            raise ValueError(f"agent {agent!r} is not seated") from None

    def occupant(self, seat: Seat) -> str:
        try:
            return self.inverse[seat]
        except KeyError:
            raise ValueError(f"seat {seat!r} is not occupied") from None

    def swap(self, i: str, j: str) -> "Arrangement":
        """The arrangement with the seats of ``i`` and ``j`` exchanged."""
        si, sj = self.seat_of(i), self.seat_of(j)
        if i == j:
            return self
        new = dict(self.assignment)
        new[i], new[j] = sj, si
        return Arrangement(new)


@dataclass(frozen=True)
class StabilityReport:
    """All ordered envies and all blocking pairs of one arrangement.

    ``envies`` holds ordered pairs ``(i, j)`` with ``i`` envying ``j``;
    ``blocking_pairs`` holds each mutually-envying pair once, ordered by
    agent index. Both are sorted by agent index for stable output.
    """

    envies: tuple[tuple[str, str], ...]
    blocking_pairs: tuple[tuple[str, str], ...]

    @property
    def is_envy_free(self) -> bool:
        return not self.envies

    @property
    def is_exchange_stable(self) -> bool:
        return not self.blocking_pairs


def agent_utility(
    profile: PreferenceProfile, graph: SeatGraph, arrangement: Arrangement, agent: str
) -> int:
    """Sum of ``agent``'s preference values over the occupants of adjacent seats."""
    seat = arrangement.seat_of(agent)
    total = 0
    for v in graph.neighbors(seat):
        other = arrangement.inverse.get(v)
        if other is not None:
            total += profile.value(agent, other)
    return total


def envies(
    profile: PreferenceProfile,
    graph: SeatGraph,
    arrangement: Arrangement,
    i: str,
    j: str,
) -> bool:
    """True iff ``i``'s utility strictly increases when ``i`` and ``j`` swap seats.

    Reference evaluation: materializes the swapped arrangement and
    recomputes the utility from scratch. ``swapped_utility`` is the
    equivalent fast path.
    """
    if i == j:
        raise ValueError("envy toward oneself is undefined")
    after = arrangement.swap(i, j)
    return agent_utility(profile, graph, after, i) > agent_utility(
        profile, graph, arrangement, i
    )


def swapped_utility(
    profile: PreferenceProfile,
    graph: SeatGraph,
    arrangement: Arrangement,
    i: str,
    j: str,
) -> int:
    """Utility of ``i`` after swapping seats with ``j``, without building the swap.

    Equal to ``agent_utility(profile, graph, arrangement.swap(i, j), i)``;
    the adjacent-seat case (``i`` next to ``j``) is handled by remapping
    the occupant of ``i``'s old seat to ``j``.
    """
    if i == j:
        return agent_utility(profile, graph, arrangement, i)
    si = arrangement.seat_of(i)
    sj = arrangement.seat_of(j)
    total = 0
    for w in graph.neighbors(sj):
        other = j if w == si else arrangement.inverse.get(w)
        if other is not None:
            total += profile.value(i, other)
    return total


def _seating_arrays(
    profile: PreferenceProfile, graph: SeatGraph, arrangement: Arrangement
) -> tuple[list[int], list[int]]:
    """(agent index -> seat index, seat index -> agent index), fully validated."""
    n = profile.n
    if graph.num_seats != n:
        raise ValueError(f"{n} agents but {graph.num_seats} seats")
    if len(arrangement.assignment) != n:
        raise ValueError(
            f"arrangement seats {len(arrangement.assignment)} agents, expected {n}"
        )
    idx = profile.index_of
    pos = [-1] * n
    occ = [-1] * n
    for name, seat in arrangement.assignment.items():
        if name not in idx:
            raise ValueError(f"arrangement seats unknown agent {name!r}")
        si = graph.seat_index(seat)
        pos[idx[name]] = si
        occ[si] = idx[name]
    return pos, occ


def stability_report(
    profile: PreferenceProfile, graph: SeatGraph, arrangement: Arrangement
) -> StabilityReport:
    """Enumerate every ordered envy and every blocking pair of ``arrangement``."""
    pos, occ = _seating_arrays(profile, graph, arrangement)
    n = profile.n
    nbr = graph.neighbor_indices
    matrix = profile.matrix
    base = [0] * n
    for i in range(n):
        row = matrix[i]
        base[i] = sum(row[occ[w]] for w in nbr[pos[i]])
    found: list[tuple[int, int]] = []
    for i in range(n):
        row = matrix[i]
        ui = base[i]
        si = pos[i]
        for j in range(n):
            if i == j:
                continue
            u = 0
            for w in nbr[pos[j]]:
                u += row[j] if w == si else row[occ[w]]
            if u > ui:
                found.append((i, j))
    envy_set = set(found)
    names = profile.agents
    ordered = tuple((names[i], names[j]) for i, j in sorted(found))
    blocking = tuple(
        (names[i], names[j])
        for i, j in sorted(found)
        if i < j and (j, i) in envy_set
    )
    return StabilityReport(envies=ordered, blocking_pairs=blocking)


def arrangement_stats(
    profile: PreferenceProfile, graph: SeatGraph, arrangement: Arrangement
) -> tuple[int, int]:
    """(total utility over all agents, minimum per-agent utility)."""
    pos, occ = _seating_arrays(profile, graph, arrangement)
    nbr = graph.neighbor_indices
    matrix = profile.matrix
    utilities = [
        sum(matrix[i][occ[w]] for w in nbr[pos[i]]) for i in range(profile.n)
    ]
    return sum(utilities), min(utilities)
