"""Compile a universal-sink digraph into a grid seat-arrangement instance.

Five construction families are supported, one per target problem and
grid height: envy-freeness on 2-row grids (``efa2``) and on grids with
3+ rows (``efa-grid``), and exchange stability on 2-row (``esa2``),
3-row (``esa3``), and 4+-row (``esa-grid``) grids. Every family turns a
digraph on ``v_1 .. v_n`` into an instance whose certified arrangements
correspond exactly to the digraph's directed Hamiltonian paths.

Each vertex ``v_i`` contributes a chain triple ``x_i, y_i, z_i`` plus
anchor agents (``a_i, b_i, c_i``, and ``d_i, e_i, f_i`` on tall grids).
``x_i`` favors ``y_i``, ``y_i`` favors ``z_i``, and ``z_i`` favors
``x_p`` for every arc ``(v_i, v_p)``, so chains can only connect along
arcs. The anchors pin their chain agent in place. The exchange-stability
families add a strongly disliked agent ``s`` that wants everyone, caged
by ``t``-agents in a corner, which upgrades one-sided envy into blocking
pairs. Grids taller than the gadget rows are padded with indifferent
dummy agents ``D_k``.

``forward_witness`` lays the chains out along a given Hamiltonian path
and certifies the result with the stability checker before returning
it. ``extract_path`` reads the path back from any certified
arrangement by scanning which ``z_i`` sits next to which ``x_j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .digraph import Digraph, has_universal_sink, is_hamiltonian_path
from .errors import ConstructionError, ExtractionError
from .model import Arrangement, PreferenceProfile, Seat, SeatGraph, stability_report


class Family(str, Enum):
    """The five instance families, keyed by target property and grid height."""

    EFA2 = "efa2"
    EFA_GRID = "efa-grid"
    ESA2 = "esa2"
    ESA3 = "esa3"
    ESA_GRID = "esa-grid"

    @property
    def targets_envy_freeness(self) -> bool:
        return self in (Family.EFA2, Family.EFA_GRID)

    @property
    def fixed_rows(self) -> int | None:
        return {Family.EFA2: 2, Family.ESA2: 2, Family.ESA3: 3}.get(self)

    @property
    def min_rows(self) -> int:
        if self is Family.EFA_GRID:
            return 3
        if self is Family.ESA_GRID:
            return 4
        return self.fixed_rows  # type: ignore[return-value]

    @property
    def chain_roles(self) -> str:
        return "xyzabc" if self in (Family.EFA2, Family.ESA2) else "xyzabcdef"

    @property
    def t_count(self) -> int:
        return {Family.ESA2: 3, Family.ESA3: 4, Family.ESA_GRID: 4}.get(self, 0)

    @property
    def favorite_value(self) -> int:
        if self.targets_envy_freeness:
            return 1
        return 3 if self is Family.ESA2 else 4

    @property
    def s_penalty(self) -> int:
        return -10 if self is Family.ESA2 else -17


#: Each anchor role and the chain role it favors.
_ANCHOR_OF = {"a": "x", "b": "y", "c": "z", "d": "x", "e": "y", "f": "z"}


@dataclass(frozen=True)
class Roles:
    """Who plays which part: a partition of the instance's agents.

    ``chains[r][i-1]`` is the role-``r`` agent of source vertex ``v_i``.
    """

    chains: Mapping[str, tuple[str, ...]]
    s: str | None
    t: tuple[str, ...]
    dummies: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "chains", dict(self.chains))

    def chain_agent(self, role: str, vertex: int) -> str:
        return self.chains[role][vertex - 1]

    def all_agents(self) -> list[str]:
        out = [name for names in self.chains.values() for name in names]
        if self.s is not None:
            out.append(self.s)
        out.extend(self.t)
        out.extend(self.dummies)
        return out


@dataclass(frozen=True)
class ReducedInstance:
    """A compiled instance plus the role metadata that makes it self-describing."""

    profile: PreferenceProfile
    seats: SeatGraph
    roles: Roles
    family: Family
    rows: int
    source: Digraph

    @property
    def n(self) -> int:
        return self.source.n


def expected_shape(
    family: Family, n: int, rows: int | None = None
) -> tuple[int, int, int, int]:
    """Closed-form ``(agent_count, rows, cols, dummy_count)`` of a family instance."""
    rows = _resolve_rows(family, rows)
    if n < 1:
        raise ValueError("need at least one source vertex")
    if family is Family.EFA2:
        return 6 * n, 2, 3 * n, 0
    if family is Family.EFA_GRID:
        return 3 * n * rows, rows, 3 * n, 3 * n * rows - 9 * n
    if family is Family.ESA2:
        return 6 * n + 4, 2, 3 * n + 2, 0
    if family is Family.ESA3:
        return 9 * n + 6, 3, 3 * n + 2, 1
    return (
        3 * n * rows + 2 * rows,
        rows,
        3 * n + 2,
        3 * n * rows + 2 * rows - 9 * n - 5,
    )


def _resolve_rows(family: Family, rows: int | None) -> int:
    fixed = family.fixed_rows
    if fixed is not None:
        if rows is not None and rows != fixed:
            raise ValueError(f"{family.value} instances always have {fixed} rows")
        return fixed
    if rows is None:
        raise ValueError(f"{family.value} needs an explicit row count")
    if rows < family.min_rows:
        raise ValueError(f"{family.value} needs at least {family.min_rows} rows")
    return rows


def reduce(source: Digraph, family: Family, rows: int | None = None) -> ReducedInstance:
    """Compile ``source`` into a seat-arrangement instance of ``family``.

    ``source`` must be a universal-sink instance (its Hamiltonian paths,
    if any, all end at ``v_n``). The emitted profile is binary for the
    envy-freeness families.
    """
    if not has_universal_sink(source):
        raise ValueError(
            "source is not a universal-sink instance: v_n must have no outgoing "
            "arc and an incoming arc from every other vertex"
        )
    rows = _resolve_rows(family, rows)
    n = source.n
    agent_total, _, cols, dummy_count = expected_shape(family, n, rows)

    chains = {
        role: tuple(f"{role}{i}" for i in range(1, n + 1))
        for role in family.chain_roles
    }
    s_name = "s" if family.t_count else None
    t_names = tuple(f"t{k}" for k in range(1, family.t_count + 1))
    dummy_names = tuple(f"D{k}" for k in range(1, dummy_count + 1))
    roles = Roles(chains=chains, s=s_name, t=t_names, dummies=dummy_names)

    agents = roles.all_agents()
    assert len(agents) == agent_total

    fav = family.favorite_value
    defaults: dict[str, int] = {}
    overrides: dict[tuple[str, str], int] = {}
    chain_agents = [name for names in chains.values() for name in names]

    if not family.targets_envy_freeness:
        for g in chain_agents:
            defaults[g] = -1
            overrides[(g, s_name)] = family.s_penalty
            for t in t_names:
                overrides[(g, t)] = 0
        defaults[s_name] = 1
        for t in t_names:
            overrides[(s_name, t)] = 0
            overrides[(t, s_name)] = 1
        for dummy in dummy_names:
            overrides[(dummy, s_name)] = -17

    for i in range(1, n + 1):
        overrides[(chains["x"][i - 1], chains["y"][i - 1])] = fav
        overrides[(chains["y"][i - 1], chains["z"][i - 1])] = fav
        for role, target in _ANCHOR_OF.items():
            if role in chains:
                overrides[(chains[role][i - 1], chains[target][i - 1])] = fav
    for i, p in source.arcs:
        # v_n has no outgoing arc, so z_n gets no favorite here.
        overrides[(chains["z"][i - 1], chains["x"][p - 1])] = fav
    if not family.targets_envy_freeness:
        overrides[(chains["z"][n - 1], chains["c"][n - 1])] = fav

    profile = PreferenceProfile(tuple(agents), defaults, overrides)
    seats = SeatGraph.grid(rows, cols)
    return ReducedInstance(
        profile=profile, seats=seats, roles=roles, family=family, rows=rows, source=source
    )


def _special_layout(ri: ReducedInstance) -> dict[str, Seat]:
    """Seats of s, the t-agents, and the dummies; chain blocks fill the rest."""
    family, rows, roles = ri.family, ri.rows, ri.roles
    cols = ri.seats.cols
    placed: dict[str, Seat] = {}
    dummy_cells: list[Seat] = []
    if family is Family.EFA2:
        pass
    elif family is Family.EFA_GRID:
        dummy_cells = [(r, c) for r in range(3, rows) for c in range(cols)]
    elif family is Family.ESA2:
        placed = {"s": (0, 0), "t1": (0, 1), "t2": (1, 0), "t3": (1, 1)}
    else:
        # The cage: s in the middle of column 0, fenced by t1/t2/t3; t4 and
        # the column-1 filler keep the cage's flank occupied.
        placed = {"t1": (0, 0), "s": (1, 0), "t2": (2, 0), "t4": (0, 1), "t3": (1, 1)}
        if family is Family.ESA3:
            placed["D1"] = (2, 1)
        else:
            dummy_cells = [(2, 1)]
            dummy_cells += [(r, c) for r in range(3, rows) for c in (0, 1)]
            dummy_cells += [(r, c) for r in range(3, rows) for c in range(2, cols)]
    for name, cell in zip(roles.dummies, sorted(dummy_cells)):
        placed[name] = cell
    return placed


def forward_witness(ri: ReducedInstance, path: Sequence[int]) -> Arrangement:
    """The certified arrangement encoding a Hamiltonian path of the source.

    Chain blocks are laid out left to right in path order, so the agents
    of ``path[k]`` occupy block ``k``. The layout is checked (envy-free
    or exchange-stable, per family) before being returned; a generic
    certified search backs it up should a layout ever fail its check.
    """
    path = list(path)
    if not is_hamiltonian_path(ri.source, path):
        raise ValueError("not a Hamiltonian path of the source digraph")
    if path[-1] != ri.n:
        raise ValueError("a universal-sink Hamiltonian path must end at v_n")

    family, roles = ri.family, ri.roles
    assignment = _special_layout(ri)
    base_col = 0 if family.targets_envy_freeness else 2
    if family is Family.EFA2:
        row_roles = ["abc", "xyz"]
    elif family is Family.ESA2:
        row_roles = ["xyz", "abc"]
    else:
        row_roles = ["def", "xyz", "abc"]
    for k, vertex in enumerate(path):
        for r, role_row in enumerate(row_roles):
            for offset, role in enumerate(role_row):
                assignment[roles.chain_agent(role, vertex)] = (r, base_col + 3 * k + offset)

    witness = Arrangement(assignment)
    if _certified(ri, witness):
        return witness
    return _search_fallback(ri)


def _certified(ri: ReducedInstance, arrangement: Arrangement) -> bool:
    report = stability_report(ri.profile, ri.seats, arrangement)
    if ri.family.targets_envy_freeness:
        return report.is_envy_free
    return report.is_exchange_stable


def _search_fallback(ri: ReducedInstance) -> Arrangement:
    # Unreachable for the shipped layouts; kept so the public contract
    # ("certified witness") survives layout edits.
    from . import solver

    solve = (
        solver.solve_envy_free
        if ri.family.targets_envy_freeness
        else solver.solve_exchange_stable
    )
    outcome = solve(ri.profile, ri.seats, strategy="backtrack", budget=5_000_000)
    if outcome.status is solver.Status.YES and outcome.witness is not None:
        return outcome.witness
    raise ConstructionError(
        f"{ri.family.value} layout failed its certifying check and no fallback "
        "witness was found"
    )


def extract_path(ri: ReducedInstance, arrangement: Arrangement) -> list[int]:
    """Read the encoded Hamiltonian path off a certified arrangement.

    Builds the auxiliary digraph on ``u_1 .. u_n`` with an arc
    ``(u_i, u_j)`` whenever ``z_i`` sits next to ``x_j``, checks that it
    is a single spanning path, and maps it back to source vertices. The
    final check that the result follows actual source arcs rejects
    adjacencies that do not correspond to arcs, so an uncertified input
    fails here instead of yielding a bogus path.
    """
    n = ri.n
    graph = ri.seats
    x_seats = {}
    z_seats = {}
    for i in range(1, n + 1):
        x_seats[i] = arrangement.seat_of(ri.roles.chain_agent("x", i))
        z_seats[i] = arrangement.seat_of(ri.roles.chain_agent("z", i))

    arcs: list[tuple[int, int]] = []
    out_arcs: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
    in_count: dict[int, int] = {i: 0 for i in range(1, n + 1)}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if graph.adjacent(z_seats[i], x_seats[j]):
                arcs.append((i, j))
                out_arcs[i].append(j)
                in_count[j] += 1

    all_arcs = tuple(arcs)
    for i in range(1, n):
        if not out_arcs[i]:
            raise ExtractionError(
                f"missing out-arc at u_{i}: z_{i} sits next to no x_j",
                reason="missing out-arc",
                vertex=i,
                arcs=all_arcs,
            )
        if len(out_arcs[i]) > 1:
            raise ExtractionError(
                f"branching at u_{i}: z_{i} sits next to {len(out_arcs[i])} x-agents",
                reason="branching",
                vertex=i,
                arcs=all_arcs,
            )
    for j in range(1, n + 1):
        if in_count[j] > 1:
            raise ExtractionError(
                f"multiple in-arcs at u_{j}: {in_count[j]} z-agents sit next to x_{j}",
                reason="multiple in-arcs",
                vertex=j,
                arcs=all_arcs,
            )

    starts = [i for i in range(1, n + 1) if in_count[i] == 0]
    if not starts:
        raise ExtractionError(
            "every vertex has an in-arc: the adjacency digraph is a union of cycles",
            reason="cycle",
            arcs=all_arcs,
        )
    # in-degrees <= 1 and out-degrees forced above leave at most one start.
    sequence = [starts[0]]
    seen = {starts[0]}
    while out_arcs[sequence[-1]]:
        nxt = out_arcs[sequence[-1]][0]
        if nxt in seen:
            raise ExtractionError(
                f"cycle through u_{nxt}",
                reason="cycle",
                vertex=nxt,
                arcs=all_arcs,
            )
        sequence.append(nxt)
        seen.add(nxt)
    if len(sequence) != n:
        raise ExtractionError(
            f"adjacency path covers {len(sequence)} of {n} vertices; "
            "the rest form cycles",
            reason="cycle",
            arcs=all_arcs,
        )
    if not is_hamiltonian_path(ri.source, sequence):
        raise ExtractionError(
            "adjacency path does not follow source arcs",
            reason="not a source path",
            arcs=all_arcs,
        )
    return sequence
