"""Exact existence deciders for envy-free and exchange-stable arrangements.

Two strategies: ``naive`` enumerates every arrangement (modulo grid
symmetry) and is capped at 10 seats; ``backtrack`` fills seats in
column-major order and prunes a branch as soon as two *closed* agents
exhibit an envy, where an agent is closed once its seat and all of that
seat's neighbors are occupied. An envy between two closed agents is the
same in every completion, so the pruning is sound. A NO answer is only
ever produced by exhaustive search; ``swap_dynamics`` is a local-search
heuristic that can answer YES or give up.

Node budgets apply per top-level branch (one branch per candidate agent
for the first seat), which keeps YES/NO answers independent of how many
worker processes the branches are spread over.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from random import Random
from typing import Callable

from .errors import CapacityError
from .model import (
    Arrangement,
    PreferenceProfile,
    SeatGraph,
    stability_report,
)

NAIVE_SEAT_LIMIT = 10


class Status(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SolveOutcome:
    status: Status
    witness: Arrangement | None
    nodes_explored: int
    elapsed: float


def _prepared(profile: PreferenceProfile, graph: SeatGraph):
    if profile.n != graph.num_seats:
        raise ValueError(f"{profile.n} agents but {graph.num_seats} seats")
    return profile.matrix, graph.neighbor_indices


def is_envy_free(
    profile: PreferenceProfile, graph: SeatGraph, arrangement: Arrangement
) -> bool:
    """Short-circuit check; equal to ``stability_report(...).is_envy_free``."""
    return _first_violation(profile, graph, arrangement, need_mutual=False) is None


def is_exchange_stable(
    profile: PreferenceProfile, graph: SeatGraph, arrangement: Arrangement
) -> bool:
    """Short-circuit check; equal to ``stability_report(...).is_exchange_stable``."""
    return _first_violation(profile, graph, arrangement, need_mutual=True) is None


def _first_violation(
    profile: PreferenceProfile,
    graph: SeatGraph,
    arrangement: Arrangement,
    need_mutual: bool,
) -> tuple[int, int] | None:
    """Lexicographically-first envy (or blocking pair, index-ordered), if any."""
    matrix, nbr = _prepared(profile, graph)
    n = profile.n
    idx = profile.index_of
    if len(arrangement.assignment) != n:
        raise ValueError(f"arrangement seats {len(arrangement.assignment)} agents, expected {n}")
    pos = [-1] * n
    occ = [-1] * n
    for name, seat in arrangement.assignment.items():
        i = idx.get(name)
        if i is None:
            raise ValueError(f"arrangement seats unknown agent {name!r}")
        si = graph.seat_index(seat)
        pos[i] = si
        occ[si] = i
    base = [0] * n
    for i in range(n):
        row = matrix[i]
        base[i] = sum(row[occ[w]] for w in nbr[pos[i]])

    def gain(i: int, j: int) -> bool:
        row = matrix[i]
        si = pos[i]
        u = 0
        for w in nbr[pos[j]]:
            u += row[j] if w == si else row[occ[w]]
        return u > base[i]

    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if need_mutual:
                if j < i:
                    continue
                if gain(i, j) and gain(j, i):
                    return (i, j)
            elif gain(i, j):
                return (i, j)
    return None


def enumerate_arrangements(
    profile: PreferenceProfile,
    graph: SeatGraph,
    visitor: Callable[[Arrangement], None],
) -> int:
    """Visit every bijection of agents onto seats exactly once; returns n!.

    No symmetry reduction: this is the ground-truth enumeration the
    deciders are tested against. Capped at 10 seats.
    """
    if graph.num_seats > NAIVE_SEAT_LIMIT:
        raise CapacityError(
            f"{graph.num_seats} seats exceeds the enumeration cap {NAIVE_SEAT_LIMIT}"
        )
    if profile.n != graph.num_seats:
        raise ValueError(f"{profile.n} agents but {graph.num_seats} seats")
    seats = graph.seats()
    count = 0
    for perm in itertools.permutations(profile.agents):
        visitor(Arrangement(dict(zip(perm, seats))))
        count += 1
    return count


def solve_envy_free(
    profile: PreferenceProfile,
    graph: SeatGraph,
    strategy: str = "backtrack",
    budget: int | None = None,
    workers: int = 1,
) -> SolveOutcome:
    """Decide whether an envy-free arrangement exists."""
    return _solve(profile, graph, strategy, budget, workers, need_mutual=False)


def solve_exchange_stable(
    profile: PreferenceProfile,
    graph: SeatGraph,
    strategy: str = "backtrack",
    budget: int | None = None,
    workers: int = 1,
) -> SolveOutcome:
    """Decide whether an exchange-stable arrangement exists."""
    return _solve(profile, graph, strategy, budget, workers, need_mutual=True)


def _solve(
    profile: PreferenceProfile,
    graph: SeatGraph,
    strategy: str,
    budget: int | None,
    workers: int,
    need_mutual: bool,
) -> SolveOutcome:
    start = time.perf_counter()
    if strategy == "naive":
        status, witness_idx, nodes = _solve_naive(profile, graph, need_mutual)
    elif strategy == "backtrack":
        status, witness_idx, nodes = _solve_backtrack(
            profile, graph, need_mutual, budget, workers
        )
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    witness = None
    if witness_idx is not None:
        seats = graph.seats()
        witness = Arrangement(
            {profile.agents[a]: seats[s] for s, a in enumerate(witness_idx)}
        )
        # Contract: a YES witness always passes the full checker.
        report = stability_report(profile, graph, witness)
        ok = report.is_exchange_stable if need_mutual else report.is_envy_free
        assert ok, "internal error: witness failed re-verification"
    return SolveOutcome(
        status=status,
        witness=witness,
        nodes_explored=nodes,
        elapsed=time.perf_counter() - start,
    )


def _solve_naive(
    profile: PreferenceProfile, graph: SeatGraph, need_mutual: bool
) -> tuple[Status, list[int] | None, int]:
    if graph.num_seats > NAIVE_SEAT_LIMIT:
        raise CapacityError(
            f"{graph.num_seats} seats exceeds the naive cap {NAIVE_SEAT_LIMIT}"
        )
    if profile.n != graph.num_seats:
        raise ValueError(f"{profile.n} agents but {graph.num_seats} seats")
    n = profile.n
    seats = graph.seats()
    reps = sorted(graph.orbit_representatives)
    check = is_exchange_stable if need_mutual else is_envy_free
    nodes = 0
    others = list(range(1, n))
    for rep in reps:
        rest_seats = [s for s in range(n) if s != rep]
        for perm in itertools.permutations(others):
            nodes += 1
            occ = [-1] * n
            occ[rep] = 0
            for s, a in zip(rest_seats, perm):
                occ[s] = a
            arrangement = Arrangement(
                {profile.agents[a]: seats[s] for s, a in enumerate(occ)}
            )
            if check(profile, graph, arrangement):
                return Status.YES, occ, nodes
    return Status.NO, None, nodes


def _fill_order(graph: SeatGraph) -> list[int]:
    # Column-major on grids closes whole columns as early as possible,
    # which is what makes closed-agent pruning bite on wide grids.
    if graph.is_grid:
        rows, cols = graph.shape  # type: ignore[misc]
        return [r * cols + c for c in range(cols) for r in range(rows)]
    return list(range(graph.num_seats))


def _search_branch(
    matrix: tuple[tuple[int, ...], ...],
    nbr: tuple[tuple[int, ...], ...],
    order: list[int],
    rep_seats: frozenset[int],
    first_agent: int,
    need_mutual: bool,
    budget: int | None,
) -> tuple[list[int] | None, int, bool]:
    """DFS one top-level branch. Returns (witness occ, nodes, exhausted_budget).

    Pruning is completion-independent only:

    * two closed agents whose fully-determined utilities exhibit an envy
      (a blocking pair, in the exchange-stability mode);
    * envy-freeness mode, non-negative preference rows only: a closed
      agent whose current utility is already beaten by the partial sum
      around some placed agent's seat envies that agent in every
      completion, because unplaced neighbors can only add more.
    """
    n = len(order)
    occ = [-1] * n
    pos = [-1] * n
    missing = [len(nbr[s]) for s in range(n)]
    util = [0] * n
    closed: list[int] = []
    is_closed = [False] * n
    # cap[i]: best utility i could ever reach; once util[i] >= cap[i] the
    # agent can never envy anyone, so it is skipped as an envier.
    max_deg = max((len(nbr[s]) for s in range(n)), default=0)
    cap = []
    nonneg = []
    for row in matrix:
        positive = sorted((v for v in row if v > 0), reverse=True)
        cap.append(sum(positive[:max_deg]))
        nonneg.append(all(v >= 0 for v in row))
    use_bound = not need_mutual
    # A closed agent can never sit next to a later-placed agent (its whole
    # neighborhood is already occupied), so an unplaced agent it values
    # above its final utility forces an envy in every completion, as long
    # as every seat has a neighbor to swap with.
    every_seat_connected = all(len(nbr[s]) > 0 for s in range(n)) if n > 1 else False
    # closed agents with a non-negative row that can still gain; their
    # forced-envy bound is re-examined whenever a nearby seat fills
    hungry: list[int] = []
    free_reps = len(rep_seats)
    agent0_placed = False
    nodes = 0
    out_of_budget = False

    def forced_envy(i: int, w: int) -> bool:
        """Does closed agent i (non-negative row) envy occ[w] in every completion?"""
        row = matrix[i]
        si = pos[i]
        j = occ[w]
        bound = 0
        for v in nbr[w]:
            if v == si:
                bound += row[j]
            else:
                a = occ[v]
                if a >= 0:
                    bound += row[a]
        return bound > util[i]

    def close_agent(i: int) -> bool:
        """Record i as closed; True if the property is now unreachable."""
        si = pos[i]
        row = matrix[i]
        u = 0
        for w in nbr[si]:
            u += row[occ[w]]
        util[i] = u
        is_closed[i] = True
        closed.append(i)
        hungry_i = u < cap[i]
        if use_bound and nonneg[i]:
            if hungry_i:
                if every_seat_connected:
                    for k in range(n):
                        if pos[k] < 0 and row[k] > u:
                            return True
                for w in range(n):
                    if w != si and occ[w] >= 0 and forced_envy(i, w):
                        return True
                hungry.append(i)
            # j -> i for mixed-sign closed rows still needs the pair check below
            for j in closed:
                if j == i or nonneg[j] or util[j] >= cap[j]:
                    continue
                rowj = matrix[j]
                sj = pos[j]
                gain = 0
                for w in nbr[si]:
                    gain += rowj[i] if w == sj else rowj[occ[w]]
                if gain > util[j]:
                    return True
            return False
        for j in closed:
            if j == i:
                continue
            sj = pos[j]
            hungry_j = util[j] < cap[j]
            if need_mutual:
                # A blocking pair needs both sides to gain.
                if not (hungry_i and hungry_j):
                    continue
                gain = 0
                for w in nbr[sj]:
                    gain += row[j] if w == si else row[occ[w]]
                if gain <= u:
                    continue
                rowj = matrix[j]
                back = 0
                for w in nbr[si]:
                    back += rowj[i] if w == sj else rowj[occ[w]]
                if back > util[j]:
                    return True
            else:
                if hungry_i:
                    gain = 0
                    for w in nbr[sj]:
                        gain += row[j] if w == si else row[occ[w]]
                    if gain > u:
                        return True
                if hungry_j and not nonneg[j]:
                    rowj = matrix[j]
                    gain = 0
                    for w in nbr[si]:
                        gain += rowj[i] if w == sj else rowj[occ[w]]
                    if gain > util[j]:
                        return True
        return False

    def place(depth: int, agent: int) -> list[int] | None:
        nonlocal nodes, free_reps, agent0_placed, out_of_budget
        if budget is not None and nodes >= budget:
            out_of_budget = True
            return None
        nodes += 1
        seat = order[depth]
        occ[seat] = agent
        pos[agent] = seat
        if agent == 0:
            agent0_placed = True
        if seat in rep_seats:
            free_reps -= 1
        newly = []
        if missing[seat] == 0:
            newly.append(agent)
        conflict = False
        for w in nbr[seat]:
            missing[w] -= 1
            if missing[w] == 0 and occ[w] >= 0:
                newly.append(occ[w])

        hungry_before = len(hungry)
        if not agent0_placed and free_reps == 0:
            conflict = True  # agent 0 can no longer reach a representative seat
            pruned_at = 0
        else:
            pruned_at = 0
            if hungry:
                # this placement grew the partial sums around these seats
                targets = [seat]
                for w in nbr[seat]:
                    if occ[w] >= 0:
                        targets.append(w)
                for i in hungry:
                    si = pos[i]
                    for w in targets:
                        if w != si and forced_envy(i, w):
                            conflict = True
                            break
                    if conflict:
                        break
            if not conflict:
                for k, i in enumerate(newly):
                    if close_agent(i):
                        conflict = True
                        pruned_at = k + 1
                        break
                    pruned_at = k + 1

        result = None
        if not conflict:
            if depth + 1 == n:
                result = occ[:]
            else:
                nxt = order[depth + 1]
                allow0 = nxt in rep_seats
                for cand in range(n):
                    if pos[cand] >= 0:
                        continue
                    if cand == 0 and not allow0:
                        continue
                    result = place(depth + 1, cand)
                    if result is not None or out_of_budget:
                        break

        del hungry[hungry_before:]
        for _ in range(pruned_at if conflict else len(newly)):
            i = closed.pop()
            is_closed[i] = False
        for w in nbr[seat]:
            missing[w] += 1
        if seat in rep_seats:
            free_reps += 1
        if agent == 0:
            agent0_placed = False
        occ[seat] = -1
        pos[agent] = -1
        return result

    witness = place(0, first_agent)
    return witness, nodes, out_of_budget


def _branch_task(args) -> tuple[int, list[int] | None, int, bool]:
    (matrix, nbr, order, rep_seats, first_agent, need_mutual, budget) = args
    witness, nodes, exhausted = _search_branch(
        matrix, nbr, order, rep_seats, first_agent, need_mutual, budget
    )
    return first_agent, witness, nodes, exhausted


def _solve_backtrack(
    profile: PreferenceProfile,
    graph: SeatGraph,
    need_mutual: bool,
    budget: int | None,
    workers: int,
) -> tuple[Status, list[int] | None, int]:
    matrix, nbr = _prepared(profile, graph)
    n = profile.n
    if n == 0:
        return Status.YES, [], 0
    order = _fill_order(graph)
    rep_seats = graph.orbit_representatives
    first_candidates = [
        a for a in range(n) if a != 0 or order[0] in rep_seats
    ]
    tasks = [
        (matrix, nbr, order, rep_seats, first, need_mutual, budget)
        for first in first_candidates
    ]
    total_nodes = 0
    any_unknown = False
    if workers <= 1:
        for task in tasks:
            _, witness, nodes, exhausted = _branch_task(task)
            total_nodes += nodes
            any_unknown = any_unknown or exhausted
            if witness is not None:
                return Status.YES, witness, total_nodes
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_branch_task, tasks))
        witnesses = []
        for first, witness, nodes, exhausted in results:
            total_nodes += nodes
            any_unknown = any_unknown or exhausted
            if witness is not None:
                witnesses.append(witness)
        if witnesses:
            # Lexicographically least by seat-ordered agent sequence, which
            # is what the sequential scan returns first.
            return Status.YES, min(witnesses), total_nodes
    if any_unknown:
        return Status.UNKNOWN, None, total_nodes
    return Status.NO, None, total_nodes


def swap_dynamics(
    profile: PreferenceProfile,
    graph: SeatGraph,
    start_seed: int = 0,
    max_steps: int = 10_000,
) -> SolveOutcome:
    """Resolve blocking pairs one swap at a time from a seeded random start.

    Applies the lexicographically-first blocking pair's swap repeatedly.
    Returns YES on reaching an exchange-stable arrangement, UNKNOWN when
    the step cap runs out first (the dynamics may cycle); never NO.
    """
    start = time.perf_counter()
    if profile.n != graph.num_seats:
        raise ValueError(f"{profile.n} agents but {graph.num_seats} seats")
    rng = Random(start_seed)
    agents = list(profile.agents)
    rng.shuffle(agents)
    current = Arrangement(dict(zip(agents, graph.seats())))
    steps = 0
    while True:
        pair = _first_violation(profile, graph, current, need_mutual=True)
        if pair is None:
            return SolveOutcome(
                status=Status.YES,
                witness=current,
                nodes_explored=steps,
                elapsed=time.perf_counter() - start,
            )
        if steps >= max_steps:
            return SolveOutcome(
                status=Status.UNKNOWN,
                witness=None,
                nodes_explored=steps,
                elapsed=time.perf_counter() - start,
            )
        i, j = pair
        current = current.swap(profile.agents[i], profile.agents[j])
        steps += 1
