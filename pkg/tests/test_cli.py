"""End-to-end CLI: exit codes, files written, pipeline consistency."""

import json

import pytest

from seatplan import Digraph, Family, forward_witness, reduce
from seatplan.cli import main
from seatplan.io import dump_json, digraph_to_json, load_json, reduced_instance_to_json, arrangement_to_json

YES_DIGRAPH = {"n": 3, "arcs": [[1, 2], [2, 3], [1, 3]]}  # path 1 2 3
NO_DIGRAPH = {"n": 3, "arcs": [[1, 3], [2, 3]]}  # valid sink form, no path
NOT_SINK = {"n": 3, "arcs": [[1, 2]]}


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, obj in (("yes", YES_DIGRAPH), ("no", NO_DIGRAPH), ("plain", NOT_SINK)):
        p = tmp_path / f"{name}.json"
        dump_json(obj, p)
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


class TestReduce:
    def test_reduce_writes_instance(self, files, capsys):
        out = files["dir"] / "inst.json"
        assert main(["reduce", files["yes"], "--theorem", "efa2", "-o", str(out)]) == 0
        obj = load_json(out)
        assert len(obj["agents"]) == 18
        assert obj["seatGraph"] == {"grid": {"rows": 2, "cols": 9}}
        assert obj["reduction"]["theorem"] == "efa2"
        assert "18 agents" in capsys.readouterr().out

    def test_reduce_rejects_non_sink_without_auto_star(self, files):
        out = files["dir"] / "inst.json"
        assert main(["reduce", files["plain"], "--theorem", "efa2", "-o", str(out)]) == 2

    def test_auto_star_appends_sink(self, files):
        out = files["dir"] / "inst.json"
        assert main(["reduce", files["plain"], "--theorem", "efa2", "--auto-star",
                     "-o", str(out)]) == 0
        assert load_json(out)["reduction"]["source"]["n"] == 4

    def test_emit_witness_writes_certified_arrangement(self, files):
        out = files["dir"] / "inst.json"
        wpath = files["dir"] / "w.json"
        assert main(["reduce", files["yes"], "--theorem", "esa2", "-o", str(out),
                     "--emit-witness", "--witness-out", str(wpath)]) == 0
        assert main(["check", "--mode", "exchange-stable", str(out), str(wpath)]) == 0

    def test_emit_witness_fails_cleanly_without_path(self, files):
        out = files["dir"] / "inst.json"
        assert main(["reduce", files["no"], "--theorem", "esa2", "-o", str(out),
                     "--emit-witness"]) == 1

    def test_grid_family_needs_rows(self, files):
        out = files["dir"] / "inst.json"
        assert main(["reduce", files["yes"], "--theorem", "efa-grid", "-o", str(out)]) == 2
        assert main(["reduce", files["yes"], "--theorem", "efa-grid", "--rows", "4",
                     "-o", str(out)]) == 0

    def test_malformed_digraph_file(self, files):
        bad = files["dir"] / "bad.json"
        bad.write_text("{ not json")
        out = files["dir"] / "inst.json"
        assert main(["reduce", str(bad), "--theorem", "efa2", "-o", str(out)]) == 2


class TestCheck:
    def test_witness_passes_and_failure_lists_envies(self, files, capsys):
        out = files["dir"] / "inst.json"
        wpath = files["dir"] / "w.json"
        main(["reduce", files["yes"], "--theorem", "efa2", "-o", str(out),
              "--emit-witness", "--witness-out", str(wpath)])
        assert main(["check", "--mode", "envy-free", str(out), str(wpath)]) == 0
        capsys.readouterr()
        # corrupt: swap two agents to break envy-freeness
        obj = load_json(wpath)
        obj["assignment"]["x1"], obj["assignment"]["z1"] = (
            obj["assignment"]["z1"], obj["assignment"]["x1"])
        dump_json(obj, wpath)
        assert main(["check", "--mode", "envy-free", str(out), str(wpath)]) == 1
        assert "envies" in capsys.readouterr().out

    def test_missing_agent_is_input_error(self, files):
        out = files["dir"] / "inst.json"
        wpath = files["dir"] / "w.json"
        main(["reduce", files["yes"], "--theorem", "efa2", "-o", str(out),
              "--emit-witness", "--witness-out", str(wpath)])
        obj = load_json(wpath)
        del obj["assignment"]["x1"]
        dump_json(obj, wpath)
        assert main(["check", "--mode", "envy-free", str(out), str(wpath)]) == 2


class TestSolve:
    def test_yes_with_witness_file(self, files, capsys):
        out = files["dir"] / "inst.json"
        main(["reduce", files["yes"], "--theorem", "efa2", "-o", str(out)])
        wpath = files["dir"] / "solved.json"
        code = main(["solve", "--mode", "envy-free", str(out),
                     "--witness-out", str(wpath)])
        assert code == 0
        assert "nodes explored" in capsys.readouterr().out
        assert main(["check", "--mode", "envy-free", str(out), str(wpath)]) == 0

    def test_no_instance(self, files):
        out = files["dir"] / "inst.json"
        main(["reduce", files["no"], "--theorem", "efa2", "-o", str(out)])
        assert main(["solve", "--mode", "envy-free", str(out)]) == 1

    def test_budget_exhaustion_is_exit_3(self, files):
        out = files["dir"] / "inst.json"
        main(["reduce", files["no"], "--theorem", "efa2", "-o", str(out)])
        assert main(["solve", "--mode", "envy-free", str(out), "--budget", "1"]) == 3


class TestExtractPath:
    def test_extracts_and_prints_path(self, files, capsys):
        out = files["dir"] / "inst.json"
        wpath = files["dir"] / "w.json"
        main(["reduce", files["yes"], "--theorem", "efa2", "-o", str(out),
              "--emit-witness", "--witness-out", str(wpath)])
        capsys.readouterr()
        assert main(["extract-path", str(out), str(wpath)]) == 0
        assert capsys.readouterr().out.strip() == "1 2 3"

    def test_corrupted_arrangement_is_exit_1(self, files, capsys):
        out = files["dir"] / "inst.json"
        wpath = files["dir"] / "w.json"
        main(["reduce", files["yes"], "--theorem", "efa2", "-o", str(out),
              "--emit-witness", "--witness-out", str(wpath)])
        obj = load_json(wpath)
        obj["assignment"]["z1"], obj["assignment"]["b2"] = (
            obj["assignment"]["b2"], obj["assignment"]["z1"])
        dump_json(obj, wpath)
        assert main(["extract-path", str(out), str(wpath)]) == 1

    def test_plain_instance_is_exit_2(self, files, tmp_path):
        inst = tmp_path / "plain_inst.json"
        dump_json(
            {
                "agents": ["p", "q"],
                "seatGraph": {"grid": {"rows": 1, "cols": 2}},
                "defaults": {},
                "utilities": [],
            },
            inst,
        )
        wpath = tmp_path / "arr.json"
        dump_json({"assignment": {"p": [0, 0], "q": [0, 1]}}, wpath)
        assert main(["extract-path", str(inst), str(wpath)]) == 2


class TestRoundtrip:
    @pytest.mark.parametrize("theorem,rows", [
        ("efa2", None), ("efa-grid", "3"), ("esa2", None), ("esa3", None), ("esa-grid", "4"),
    ])
    def test_roundtrip_yes(self, files, theorem, rows):
        args = ["roundtrip", files["yes"], "--theorem", theorem]
        if rows:
            args += ["--rows", rows]
        assert main(args) == 0

    def test_roundtrip_no_path(self, files, capsys):
        assert main(["roundtrip", files["no"], "--theorem", "esa3"]) == 1
        assert "no Hamiltonian path" in capsys.readouterr().out

    def test_roundtrip_non_sink_is_input_error(self, files):
        assert main(["roundtrip", files["plain"], "--theorem", "efa2"]) == 2


class TestHampathGen:
    def test_hampath_prints_path(self, files, capsys):
        assert main(["hampath", files["yes"]]) == 0
        assert capsys.readouterr().out.strip() == "1 2 3"

    def test_hampath_no_path(self, files):
        assert main(["hampath", files["no"]]) == 1

    def test_gen_is_deterministic(self, files):
        a = files["dir"] / "a.json"
        b = files["dir"] / "b.json"
        assert main(["gen", "6", "0.5", "11", "-o", str(a)]) == 0
        assert main(["gen", "6", "0.5", "11", "-o", str(b)]) == 0
        assert load_json(a) == load_json(b)

    def test_gen_pipes_into_reduce(self, files):
        d = files["dir"] / "d.json"
        inst = files["dir"] / "i.json"
        main(["gen", "4", "0.6", "3", "-o", str(d)])
        assert main(["reduce", str(d), "--theorem", "efa2", "--auto-star",
                     "-o", str(inst)]) == 0


class TestRender:
    def test_smallest_witness_grid(self, files, capsys, tmp_path):
        ri = reduce(Digraph(1), Family.EFA2)
        inst = tmp_path / "i.json"
        dump_json(reduced_instance_to_json(ri), inst)
        w = forward_witness(ri, [1])
        wpath = tmp_path / "w.json"
        dump_json(arrangement_to_json(w, ri.seats), wpath)
        assert main(["render", str(inst), str(wpath)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert [x.split() for x in lines] == [
            ["a1", "b1", "c1"],
            ["1", "1", "1"],
            ["x1", "y1", "z1"],
            ["1", "1", "0"],
        ]
