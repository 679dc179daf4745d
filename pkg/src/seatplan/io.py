"""JSON file formats: instances, digraphs, arrangements.

All files are UTF-8 JSON. Parsing is strict: unknown keys are rejected
so typos in hand-written files fail loudly. Digraph vertices are
1-based (matching ``v_1 .. v_n``); grid seats are 0-based
``[row, col]`` pairs and explicit-graph seats are integer ids.

Instance files carry the preference profile as per-agent ``defaults``
plus ``utilities`` triples ``[i, j, value]`` (later triples win).
Compiled instances embed a ``reduction`` block (family tag, source
digraph, role table) so the encoded path can be re-extracted from the
file alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from .digraph import Digraph
from .model import Arrangement, PreferenceProfile, Seat, SeatGraph
from .reductions import Family, ReducedInstance, Roles


@dataclass(frozen=True)
class Instance:
    """A parsed instance file: profile, seats, and the reduction block if any."""

    profile: PreferenceProfile
    seats: SeatGraph
    reduction: ReducedInstance | None = None


def _require_keys(obj: Any, what: str, required: set[str], optional: set[str] = frozenset()) -> None:
    if not isinstance(obj, dict):
        raise ValueError(f"{what} must be a JSON object")
    keys = set(obj)
    missing = required - keys
    unknown = keys - required - optional
    if missing:
        raise ValueError(f"{what} is missing keys: {sorted(missing)}")
    if unknown:
        raise ValueError(f"{what} has unknown keys: {sorted(unknown)}")


def _int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{what} must be an integer, got {value!r}")
    return value


# -- digraphs ---------------------------------------------------------------

def digraph_to_json(d: Digraph) -> dict:
    return {"n": d.n, "arcs": [list(a) for a in d.arcs_sorted]}


def digraph_from_json(obj: Any) -> Digraph:
    _require_keys(obj, "digraph", {"n", "arcs"})
    n = _int(obj["n"], "n")
    arcs = []
    for arc in obj["arcs"]:
        if not (isinstance(arc, list) and len(arc) == 2):
            raise ValueError(f"arc {arc!r} must be a [from, to] pair")
        arcs.append((_int(arc[0], "arc endpoint"), _int(arc[1], "arc endpoint")))
    return Digraph(n, arcs)


# -- seat graphs ------------------------------------------------------------

def _seat_graph_to_json(g: SeatGraph) -> dict:
    if g.is_grid:
        return {"grid": {"rows": g.rows, "cols": g.cols}}
    return {"vertices": g.num_seats, "edges": [list(e) for e in sorted(g.edges or ())]}


def _seat_graph_from_json(obj: Any) -> SeatGraph:
    if isinstance(obj, dict) and "grid" in obj:
        _require_keys(obj, "seatGraph", {"grid"})
        _require_keys(obj["grid"], "seatGraph.grid", {"rows", "cols"})
        return SeatGraph.grid(_int(obj["grid"]["rows"], "rows"), _int(obj["grid"]["cols"], "cols"))
    _require_keys(obj, "seatGraph", {"vertices", "edges"})
    edges = []
    for e in obj["edges"]:
        if not (isinstance(e, list) and len(e) == 2):
            raise ValueError(f"edge {e!r} must be a [u, v] pair")
        edges.append((_int(e[0], "edge endpoint"), _int(e[1], "edge endpoint")))
    return SeatGraph.explicit(_int(obj["vertices"], "vertices"), edges)


# -- instances --------------------------------------------------------------

def instance_to_json(
    profile: PreferenceProfile,
    seats: SeatGraph,
    reduction: ReducedInstance | None = None,
) -> dict:
    obj = {
        "agents": list(profile.agents),
        "seatGraph": _seat_graph_to_json(seats),
        "defaults": {name: profile.defaults[name] for name in sorted(profile.defaults)},
        "utilities": [
            [i, j, value]
            for (i, j), value in sorted(profile.overrides.items())
        ],
    }
    if reduction is not None:
        roles = {
            role: list(names)
            for role, names in reduction.roles.chains.items()
        }
        if reduction.roles.s is not None:
            roles["s"] = [reduction.roles.s]
        if reduction.roles.t:
            roles["t"] = list(reduction.roles.t)
        if reduction.roles.dummies:
            roles["D"] = list(reduction.roles.dummies)
        obj["reduction"] = {
            "theorem": reduction.family.value,
            "n": reduction.n,
            "rows": reduction.rows,
            "roles": roles,
            "source": digraph_to_json(reduction.source),
        }
    return obj


def reduced_instance_to_json(ri: ReducedInstance) -> dict:
    return instance_to_json(ri.profile, ri.seats, ri)


def instance_from_json(obj: Any) -> Instance:
    _require_keys(obj, "instance", {"agents", "seatGraph", "defaults", "utilities"}, {"reduction"})
    agents = obj["agents"]
    if not isinstance(agents, list) or not all(isinstance(a, str) for a in agents):
        raise ValueError("agents must be a list of names")
    seats = _seat_graph_from_json(obj["seatGraph"])
    defaults = {}
    if not isinstance(obj["defaults"], dict):
        raise ValueError("defaults must be an object mapping agent to value")
    for name, value in obj["defaults"].items():
        defaults[name] = _int(value, f"default for {name!r}")
    overrides: dict[tuple[str, str], int] = {}
    for triple in obj["utilities"]:
        if not (isinstance(triple, list) and len(triple) == 3):
            raise ValueError(f"utility entry {triple!r} must be [i, j, value]")
        i, j, value = triple
        if not (isinstance(i, str) and isinstance(j, str)):
            raise ValueError(f"utility entry {triple!r} must name two agents")
        overrides[(i, j)] = _int(value, f"utility ({i!r},{j!r})")
    profile = PreferenceProfile(tuple(agents), defaults, overrides)
    if seats.num_seats != profile.n:
        raise ValueError(f"{profile.n} agents but {seats.num_seats} seats")
    reduction = None
    if "reduction" in obj:
        reduction = _reduction_from_json(obj["reduction"], profile, seats)
    return Instance(profile=profile, seats=seats, reduction=reduction)


def _reduction_from_json(obj: Any, profile: PreferenceProfile, seats: SeatGraph) -> ReducedInstance:
    _require_keys(obj, "reduction", {"theorem", "n", "rows", "roles", "source"})
    try:
        family = Family(obj["theorem"])
    except ValueError:
        raise ValueError(f"unknown reduction family {obj['theorem']!r}") from None
    n = _int(obj["n"], "reduction.n")
    rows = _int(obj["rows"], "reduction.rows")
    source = digraph_from_json(obj["source"])
    if source.n != n:
        raise ValueError(f"reduction.n = {n} but the source digraph has {source.n} vertices")
    roles_obj = obj["roles"]
    if not isinstance(roles_obj, dict):
        raise ValueError("reduction.roles must be an object")
    known_agents = set(profile.agents)
    chains = {}
    s_name = None
    t_names: tuple[str, ...] = ()
    dummies: tuple[str, ...] = ()
    for role, names in roles_obj.items():
        if not (isinstance(names, list) and all(isinstance(x, str) for x in names)):
            raise ValueError(f"role {role!r} must map to a list of agent names")
        bad = [x for x in names if x not in known_agents]
        if bad:
            raise ValueError(f"role {role!r} names unknown agents {bad}")
        if role == "s":
            if len(names) != 1:
                raise ValueError("role 's' must hold exactly one agent")
            s_name = names[0]
        elif role == "t":
            t_names = tuple(names)
        elif role == "D":
            dummies = tuple(names)
        elif role in "abcdefxyz" and len(role) == 1:
            if len(names) != n:
                raise ValueError(f"role {role!r} must hold {n} agents")
            chains[role] = tuple(names)
        else:
            raise ValueError(f"unknown role {role!r}")
    if set(chains) != set(family.chain_roles):
        raise ValueError(
            f"{family.value} needs chain roles {sorted(family.chain_roles)}, "
            f"got {sorted(chains)}"
        )
    roles = Roles(chains=chains, s=s_name, t=t_names, dummies=dummies)
    claimed = roles.all_agents()
    if len(claimed) != len(profile.agents) or set(claimed) != known_agents:
        raise ValueError("reduction roles do not partition the agent set")
    return ReducedInstance(
        profile=profile, seats=seats, roles=roles, family=family, rows=rows, source=source
    )


# -- arrangements -----------------------------------------------------------

def arrangement_to_json(arrangement: Arrangement, seats: SeatGraph) -> dict:
    assignment = {}
    for name in sorted(arrangement.assignment):
        seat = arrangement.assignment[name]
        seats._check(seat)
        assignment[name] = list(seat) if seats.is_grid else seat
    return {"assignment": assignment}


def arrangement_from_json(obj: Any, seats: SeatGraph) -> Arrangement:
    _require_keys(obj, "arrangement", {"assignment"})
    raw = obj["assignment"]
    if not isinstance(raw, dict):
        raise ValueError("assignment must map agent names to seats")
    assignment: dict[str, Seat] = {}
    for name, seat in raw.items():
        if seats.is_grid:
            if not (isinstance(seat, list) and len(seat) == 2):
                raise ValueError(f"seat for {name!r} must be a [row, col] pair")
            parsed: Seat = (_int(seat[0], "row"), _int(seat[1], "col"))
        else:
            parsed = _int(seat, f"seat for {name!r}")
        if not seats.contains(parsed):
            raise ValueError(f"seat {seat!r} for {name!r} is not on the seat graph")
        assignment[name] = parsed
    return Arrangement(assignment)


# -- file helpers -----------------------------------------------------------

def dump_json(obj: Mapping, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from None
