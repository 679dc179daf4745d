"""Directed graphs, universal-sink instances, and an exact Hamiltonian-path oracle.

Vertices are named ``v_1 .. v_n`` and addressed 1-based everywhere in the
public interface (files included); bitmask internals are 0-based. A
*universal-sink* instance is one whose last vertex ``v_n`` has no
outgoing arc and an incoming arc from every other vertex; any digraph
can be brought into this form by appending a fresh sink, which preserves
the existence of a directed Hamiltonian path.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import CapacityError

#: Hard default bound for the subset-DP oracle (O(n^2 * 2^n) states).
DEFAULT_ORACLE_BOUND = 24


@dataclass(frozen=True)
class Digraph:
    """A simple directed graph on vertices ``1 .. n``."""

    n: int
    arcs: frozenset[tuple[int, int]]

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()) -> None:
        if n < 1:
            raise ValueError("a digraph needs at least one vertex")
        arc_set = set()
        for i, j in arcs:
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"arc ({i},{j}) out of range 1..{n}")
            if i == j:
                raise ValueError(f"self-arc at vertex {i}")
            arc_set.add((i, j))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "arcs", frozenset(arc_set))

    def has_arc(self, i: int, j: int) -> bool:
        return (i, j) in self.arcs

    def out_neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(sorted(j for (a, j) in self.arcs if a == i))

    @cached_property
    def arcs_sorted(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.arcs))


def has_universal_sink(d: Digraph) -> bool:
    """True iff ``v_n`` has out-degree 0 and an incoming arc from every other vertex."""
    n = d.n
    if any(i == n for i, _ in d.arcs):
        return False
    incoming = {i for i, j in d.arcs if j == n}
    return len(incoming) == n - 1


def add_universal_sink(d: Digraph) -> Digraph:
    """Append a fresh vertex ``v_{n+1}`` with an arc from every existing vertex.

    The result always satisfies ``has_universal_sink`` and has a directed
    Hamiltonian path iff ``d`` does: a path of ``d`` extends by the sink,
    and any path of the result must end at the sink, so dropping it gives
    a path of ``d``.
    """
    sink = d.n + 1
    return Digraph(sink, set(d.arcs) | {(v, sink) for v in range(1, sink)})


def is_hamiltonian_path(d: Digraph, seq: Sequence[int]) -> bool:
    """True iff ``seq`` visits every vertex exactly once along arcs of ``d``."""
    if len(seq) != d.n or set(seq) != set(range(1, d.n + 1)):
        return False
    return all(d.has_arc(a, b) for a, b in zip(seq, seq[1:]))


def hamiltonian_path(
    d: Digraph, *, max_vertices: int = DEFAULT_ORACLE_BOUND
) -> list[int] | None:
    """A directed Hamiltonian path of ``d``, or None if there is none.

    Subset dynamic programming over (visited set, last vertex) states.
    Deterministic: the final vertex and each predecessor during
    reconstruction are chosen lowest-index-first.
    """
    n = d.n
    if n > max_vertices:
        raise CapacityError(f"{n} vertices exceeds the oracle bound {max_vertices}")
    if n == 1:
        return [1]
    out_mask = [0] * n
    in_mask = [0] * n
    for i, j in d.arcs:
        out_mask[i - 1] |= 1 << (j - 1)
        in_mask[j - 1] |= 1 << (i - 1)
    full = (1 << n) - 1
    # reachable[mask] has bit v set iff some path covering mask ends at v
    reachable = [0] * (full + 1)
    for v in range(n):
        reachable[1 << v] = 1 << v
    for mask in range(1, full + 1):
        ends = reachable[mask]
        if not ends:
            continue
        v = 0
        while ends:
            if ends & 1:
                grow = out_mask[v] & ~mask
                u = 0
                while grow:
                    if grow & 1:
                        reachable[mask | (1 << u)] |= 1 << u
                    grow >>= 1
                    u += 1
            ends >>= 1
            v += 1
    ends = reachable[full]
    if not ends:
        return None
    last = (ends & -ends).bit_length() - 1
    path = [last]
    mask = full
    while mask != (1 << last):
        rest = mask ^ (1 << last)
        preds = reachable[rest] & in_mask[last]
        last = (preds & -preds).bit_length() - 1
        path.append(last)
        mask = rest
    path.reverse()
    return [v + 1 for v in path]


def random_digraph(n: int, arc_probability: float, seed: int) -> Digraph:
    """Each ordered pair ``(i, j)``, ``i != j``, becomes an arc independently.

    Deterministic for a fixed seed: pairs are drawn in sorted order from
    ``random.Random(seed)``.
    """
    if not 0.0 <= arc_probability <= 1.0:
        raise ValueError("arc probability must lie in [0, 1]")
    rng = random.Random(seed)
    arcs = [
        (i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j and rng.random() < arc_probability
    ]
    return Digraph(n, arcs)
