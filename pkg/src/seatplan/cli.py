"""Command-line front end.

Exit codes are uniform across subcommands: 0 success / property holds,
1 property fails / no solution / no path, 2 malformed input or contract
violation, 3 search gave up (budget exhausted). Reports go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .digraph import (
    add_universal_sink,
    hamiltonian_path,
    has_universal_sink,
    random_digraph,
)
from .errors import CapacityError, ConstructionError, ExtractionError
from .model import Arrangement, PreferenceProfile, SeatGraph, agent_utility, stability_report
from .reductions import Family, extract_path, forward_witness, reduce
from .solver import Status, solve_envy_free, solve_exchange_stable

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_UNKNOWN = 3

_MODES = ("envy-free", "exchange-stable")


def _err(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def _load_instance(path: str) -> io.Instance:
    return io.instance_from_json(io.load_json(path))


def _load_arrangement(path: str, seats: SeatGraph) -> Arrangement:
    return io.arrangement_from_json(io.load_json(path), seats)


def _witness_path(out: str, explicit: str | None) -> Path:
    if explicit:
        return Path(explicit)
    base = Path(out)
    return base.with_name(base.stem + ".witness.json")


def cmd_reduce(args: argparse.Namespace) -> int:
    digraph = io.digraph_from_json(io.load_json(args.digraph))
    if args.auto_star:
        digraph = add_universal_sink(digraph)
    if not has_universal_sink(digraph):
        _err(
            "digraph is not a universal-sink instance; rerun with --auto-star "
            "to append the sink vertex"
        )
        return EXIT_INPUT
    ri = reduce(digraph, Family(args.theorem), args.rows)
    io.dump_json(io.reduced_instance_to_json(ri), args.out)
    shape = f"{ri.seats.rows}x{ri.seats.cols}"
    print(f"wrote {args.out}: {ri.profile.n} agents on a {shape} grid ({ri.family.value})")
    if not args.emit_witness:
        return EXIT_OK
    path = hamiltonian_path(ri.source)
    if path is None:
        _err("source digraph has no Hamiltonian path; no witness to emit")
        return EXIT_FAIL
    witness = forward_witness(ri, path)
    wpath = _witness_path(args.out, args.witness_out)
    io.dump_json(io.arrangement_to_json(witness, ri.seats), wpath)
    print(f"wrote {wpath}: witness for path {' '.join(map(str, path))}")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    arrangement = _load_arrangement(args.arrangement, inst.seats)
    report = stability_report(inst.profile, inst.seats, arrangement)
    if args.mode == "envy-free":
        for i, j in report.envies:
            print(f"{i} envies {j}")
        print(f"envy-free: {'yes' if report.is_envy_free else 'no'}")
        return EXIT_OK if report.is_envy_free else EXIT_FAIL
    for i, j in report.blocking_pairs:
        print(f"blocking pair: {i} {j}")
    print(f"exchange-stable: {'yes' if report.is_exchange_stable else 'no'}")
    return EXIT_OK if report.is_exchange_stable else EXIT_FAIL


def cmd_solve(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    solve = solve_envy_free if args.mode == "envy-free" else solve_exchange_stable
    outcome = solve(
        inst.profile,
        inst.seats,
        strategy=args.strategy,
        budget=args.budget,
        workers=args.workers,
    )
    print(f"status: {outcome.status.value}")
    print(f"nodes explored: {outcome.nodes_explored}")
    if outcome.status is Status.YES:
        witness_json = io.arrangement_to_json(outcome.witness, inst.seats)
        if args.witness_out:
            io.dump_json(witness_json, args.witness_out)
            print(f"wrote {args.witness_out}")
        else:
            import json

            print(json.dumps(witness_json, indent=2, sort_keys=True))
        return EXIT_OK
    return EXIT_FAIL if outcome.status is Status.NO else EXIT_UNKNOWN


def cmd_extract_path(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    if inst.reduction is None:
        _err("instance file has no reduction block; nothing to extract")
        return EXIT_INPUT
    arrangement = _load_arrangement(args.arrangement, inst.seats)
    try:
        path = extract_path(inst.reduction, arrangement)
    except ExtractionError as exc:
        _err(f"extraction failed: {exc}")
        return EXIT_FAIL
    print(" ".join(map(str, path)))
    return EXIT_OK


def cmd_roundtrip(args: argparse.Namespace) -> int:
    digraph = io.digraph_from_json(io.load_json(args.digraph))
    if args.auto_star:
        digraph = add_universal_sink(digraph)
    if not has_universal_sink(digraph):
        _err("digraph is not a universal-sink instance (try --auto-star)")
        return EXIT_INPUT
    ri = reduce(digraph, Family(args.theorem), args.rows)
    path = hamiltonian_path(ri.source)
    if path is None:
        print("no Hamiltonian path; nothing to round-trip")
        return EXIT_FAIL
    # Any failure below this line contradicts the construction's guarantees.
    try:
        witness = forward_witness(ri, path)
        report = stability_report(ri.profile, ri.seats, witness)
        certified = (
            report.is_envy_free
            if ri.family.targets_envy_freeness
            else report.is_exchange_stable
        )
        if not certified:
            _err("internal inconsistency: witness failed its certifying check")
            return EXIT_INPUT
        extracted = extract_path(ri, witness)
    except (ConstructionError, ExtractionError) as exc:
        _err(f"internal inconsistency: {exc}")
        return EXIT_INPUT
    print(f"path:      {' '.join(map(str, path))}")
    print(f"extracted: {' '.join(map(str, extracted))}")
    print("roundtrip: ok")
    return EXIT_OK


def cmd_hampath(args: argparse.Namespace) -> int:
    digraph = io.digraph_from_json(io.load_json(args.digraph))
    path = hamiltonian_path(digraph)
    if path is None:
        print("no Hamiltonian path")
        return EXIT_FAIL
    print(" ".join(map(str, path)))
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    digraph = random_digraph(args.n, args.p, args.seed)
    obj = io.digraph_to_json(digraph)
    if args.out:
        io.dump_json(obj, args.out)
        print(f"wrote {args.out}: {digraph.n} vertices, {len(digraph.arcs)} arcs")
    else:
        import json

        print(json.dumps(obj, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    arrangement = _load_arrangement(args.arrangement, inst.seats)
    utilities = {
        name: agent_utility(inst.profile, inst.seats, arrangement, name)
        for name in inst.profile.agents
    }
    if not inst.seats.is_grid:
        for name in sorted(arrangement.assignment):
            print(f"{name} @ {arrangement.assignment[name]}: {utilities[name]}")
        return EXIT_OK
    rows, cols = inst.seats.rows, inst.seats.cols
    names = [[arrangement.occupant((r, c)) for c in range(cols)] for r in range(rows)]
    width = max(
        max((len(n) for row in names for n in row), default=1),
        max((len(str(u)) for u in utilities.values()), default=1),
    )
    for r in range(rows):
        print("  ".join(n.ljust(width) for n in names[r]).rstrip())
        print("  ".join(str(utilities[n]).ljust(width) for n in names[r]).rstrip())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seatplan",
        description="Seat arrangements on grids: stability checking, "
        "Hamiltonian-path gadget instances, exact solvers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="compile a digraph into a seat-arrangement instance")
    p.add_argument("digraph", help="digraph JSON file (1-based vertices)")
    p.add_argument("--theorem", required=True, choices=[f.value for f in Family])
    p.add_argument("--rows", type=int, help="grid height for the tall-grid families")
    p.add_argument("--auto-star", action="store_true", help="append a universal sink first")
    p.add_argument("-o", "--out", required=True, help="instance file to write")
    p.add_argument("--emit-witness", action="store_true",
                   help="also solve for a Hamiltonian path and write its witness arrangement")
    p.add_argument("--witness-out", help="witness file (default: OUT with .witness.json)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("check", help="report envies or blocking pairs of an arrangement")
    p.add_argument("--mode", required=True, choices=_MODES)
    p.add_argument("instance")
    p.add_argument("arrangement")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="decide existence of a stable arrangement")
    p.add_argument("--mode", required=True, choices=_MODES)
    p.add_argument("instance")
    p.add_argument("--strategy", default="backtrack", choices=("backtrack", "naive"))
    p.add_argument("--budget", type=int, help="node budget per top-level branch")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--witness-out", help="write the witness here on YES")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("extract-path", help="read the encoded path off an arrangement")
    p.add_argument("instance", help="instance file with a reduction block")
    p.add_argument("arrangement")
    p.set_defaults(func=cmd_extract_path)

    p = sub.add_parser("roundtrip",
                       help="reduce, build the witness, check it, and extract the path back")
    p.add_argument("digraph")
    p.add_argument("--theorem", required=True, choices=[f.value for f in Family])
    p.add_argument("--rows", type=int)
    p.add_argument("--auto-star", action="store_true")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("hampath", help="find a directed Hamiltonian path")
    p.add_argument("digraph")
    p.set_defaults(func=cmd_hampath)

    p = sub.add_parser("gen", help="generate a random digraph")
    p.add_argument("n", type=int)
    p.add_argument("p", type=float, help="independent arc probability")
    p.add_argument("seed", type=int)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("render", help="print an arrangement as a grid with utilities")
    p.add_argument("instance")
    p.add_argument("arrangement")
    p.set_defaults(func=cmd_render)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, CapacityError, OSError) as exc:
        _err(str(exc))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
