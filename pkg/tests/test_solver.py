"""Exact deciders, the enumeration oracle, and swap dynamics."""

import itertools
import random

import pytest

from seatplan import (
    Arrangement,
    CapacityError,
    PreferenceProfile,
    SeatGraph,
    Status,
    enumerate_arrangements,
    is_envy_free,
    is_exchange_stable,
    solve_envy_free,
    solve_exchange_stable,
    stability_report,
    swap_dynamics,
)


def random_instance(seed, graph, value_range=(-2, 2), binary=False):
    rng = random.Random(seed)
    n = graph.num_seats
    agents = tuple(f"a{i}" for i in range(n))
    overrides = {}
    for i in agents:
        for j in agents:
            if i != j:
                value = rng.choice((0, 1)) if binary else rng.randint(*value_range)
                overrides[(i, j)] = value
    return PreferenceProfile(agents, {}, overrides)


def oracle_exists(profile, graph, stable_check):
    found = False

    def visit(arrangement):
        nonlocal found
        if not found and stable_check(profile, graph, arrangement):
            found = True

    enumerate_arrangements(profile, graph, visit)
    return found


@pytest.fixture
def blocking_path():
    profile = PreferenceProfile(
        ("a0", "a1", "a2", "a3"), {}, {("a0", "a2"): 1, ("a1", "a3"): 1}
    )
    return profile, SeatGraph.grid(1, 4)


class TestEnumerate:
    def test_visit_count_is_factorial(self):
        p = PreferenceProfile(tuple("abcd"))
        g = SeatGraph.grid(2, 2)
        visits = []
        assert enumerate_arrangements(p, g, visits.append) == 24
        assert len(visits) == 24
        assert len({tuple(sorted(a.assignment.items())) for a in visits}) == 24

    def test_six_seats(self):
        p = PreferenceProfile(tuple("abcdef"))
        g = SeatGraph.grid(2, 3)
        assert enumerate_arrangements(p, g, lambda a: None) == 720

    def test_capacity_enforced(self):
        p = PreferenceProfile(tuple(f"a{i}" for i in range(12)))
        g = SeatGraph.grid(3, 4)
        with pytest.raises(CapacityError):
            enumerate_arrangements(p, g, lambda a: None)

    def test_witness_layout_is_among_visits(self):
        from seatplan import Digraph, Family, forward_witness, reduce

        ri = reduce(Digraph(1), Family.EFA2)
        count = 0

        def visit(arrangement):
            nonlocal count
            if is_envy_free(ri.profile, ri.seats, arrangement):
                count += 1

        enumerate_arrangements(ri.profile, ri.seats, visit)
        assert count >= 1


class TestFastCheckers:
    def test_match_report_flags(self):
        for seed in range(40):
            g = SeatGraph.grid(2, 3)
            p = random_instance(seed, g)
            agents = list(p.agents)
            random.Random(seed).shuffle(agents)
            pi = Arrangement(dict(zip(agents, g.seats())))
            report = stability_report(p, g, pi)
            assert is_envy_free(p, g, pi) == report.is_envy_free
            assert is_exchange_stable(p, g, pi) == report.is_exchange_stable


class TestSolvers:
    def test_all_zero_profile_is_trivially_yes(self):
        p = PreferenceProfile(tuple("abcdef"))
        g = SeatGraph.grid(2, 3)
        for strategy in ("naive", "backtrack"):
            out = solve_envy_free(p, g, strategy=strategy)
            assert out.status is Status.YES
            assert stability_report(p, g, out.witness).is_envy_free

    def test_witnesses_verify(self, blocking_path):
        p, g = blocking_path
        out = solve_exchange_stable(p, g, strategy="backtrack")
        assert out.status is Status.YES
        assert stability_report(p, g, out.witness).is_exchange_stable

    def test_blocking_path_has_stable_but_checker_rejects_start(self, blocking_path):
        p, g = blocking_path
        start = Arrangement({"a0": (0, 0), "a3": (0, 1), "a2": (0, 2), "a1": (0, 3)})
        assert not is_exchange_stable(p, g, start)
        assert solve_exchange_stable(p, g, strategy="naive").status is Status.YES

    @pytest.mark.parametrize("mode_solver,checker", [
        (solve_envy_free, is_envy_free),
        (solve_exchange_stable, is_exchange_stable),
    ])
    def test_agreement_with_enumeration(self, mode_solver, checker):
        shapes = [SeatGraph.grid(2, 3), SeatGraph.grid(1, 5),
                  SeatGraph.explicit(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])]
        for seed in range(25):
            g = shapes[seed % len(shapes)]
            p = random_instance(seed, g, binary=(seed % 3 == 0))
            expected = oracle_exists(p, g, checker)
            for strategy in ("naive", "backtrack"):
                out = mode_solver(p, g, strategy=strategy)
                assert out.status is (Status.YES if expected else Status.NO), (
                    f"seed {seed} strategy {strategy}"
                )
                if out.status is Status.YES:
                    assert checker(p, g, out.witness)

    def test_envy_free_yes_implies_exchange_stable_yes(self):
        for seed in range(15):
            g = SeatGraph.grid(2, 3)
            p = random_instance(seed, g)
            if solve_envy_free(p, g, strategy="backtrack").status is Status.YES:
                assert solve_exchange_stable(p, g, strategy="backtrack").status is Status.YES

    def test_naive_capacity(self):
        p = PreferenceProfile(tuple(f"a{i}" for i in range(12)))
        g = SeatGraph.grid(3, 4)
        with pytest.raises(CapacityError):
            solve_envy_free(p, g, strategy="naive")

    def test_size_mismatch_rejected(self):
        p = PreferenceProfile(("a", "b"))
        with pytest.raises(ValueError):
            solve_envy_free(p, SeatGraph.grid(1, 3))

    def test_unknown_strategy_rejected(self):
        p = PreferenceProfile(("a", "b"))
        with pytest.raises(ValueError):
            solve_envy_free(p, SeatGraph.grid(1, 2), strategy="magic")

    def test_budget_one_on_nontrivial_instance_is_unknown(self):
        g = SeatGraph.grid(2, 3)
        p = random_instance(5, g)
        out = solve_envy_free(p, g, strategy="backtrack", budget=1)
        assert out.status is Status.UNKNOWN

    def test_determinism(self):
        g = SeatGraph.grid(2, 3)
        p = random_instance(11, g)
        a = solve_envy_free(p, g, strategy="backtrack")
        b = solve_envy_free(p, g, strategy="backtrack")
        assert a.status == b.status
        assert a.nodes_explored == b.nodes_explored
        assert (a.witness is None) == (b.witness is None)
        if a.witness is not None:
            assert a.witness == b.witness

    def test_worker_count_does_not_change_answers(self):
        for seed in (3, 8, 19):
            g = SeatGraph.grid(2, 3)
            p = random_instance(seed, g)
            seq = solve_exchange_stable(p, g, strategy="backtrack")
            par = solve_exchange_stable(p, g, strategy="backtrack", workers=2)
            assert seq.status == par.status
            if seq.status is Status.YES:
                assert seq.witness == par.witness


class TestSwapDynamics:
    def test_stable_start_returns_in_zero_steps(self, blocking_path):
        p, g = blocking_path
        # find a seed whose shuffled start is already stable
        for seed in range(200):
            out = swap_dynamics(p, g, start_seed=seed, max_steps=0)
            if out.status is Status.YES:
                assert out.nodes_explored == 0
                return
        pytest.fail("no stable random start found in 200 seeds")

    def test_blocking_path_converges(self, blocking_path):
        p, g = blocking_path
        out = swap_dynamics(p, g, start_seed=0, max_steps=24)
        assert out.status is Status.YES
        assert stability_report(p, g, out.witness).is_exchange_stable

    def test_zero_step_cap_on_unstable_start(self, blocking_path):
        p, g = blocking_path
        for seed in range(200):
            start_rng = random.Random(seed)
            agents = list(p.agents)
            start_rng.shuffle(agents)
            start = Arrangement(dict(zip(agents, g.seats())))
            if not is_exchange_stable(p, g, start):
                out = swap_dynamics(p, g, start_seed=seed, max_steps=0)
                assert out.status is Status.UNKNOWN
                assert out.witness is None
                return
        pytest.fail("no unstable random start found")

    def test_dynamics_never_return_no(self):
        for seed in range(10):
            g = SeatGraph.grid(2, 2)
            p = random_instance(seed, g)
            out = swap_dynamics(p, g, start_seed=seed, max_steps=5)
            assert out.status in (Status.YES, Status.UNKNOWN)
