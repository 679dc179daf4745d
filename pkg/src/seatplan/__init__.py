"""Seat arrangements on grid graphs: stability checking, gadget instances, solvers."""

from .digraph import (
    Digraph,
    add_universal_sink,
    hamiltonian_path,
    has_universal_sink,
    is_hamiltonian_path,
    random_digraph,
)
from .errors import CapacityError, ConstructionError, ExtractionError
from .model import (
    Arrangement,
    PreferenceProfile,
    Seat,
    SeatGraph,
    StabilityReport,
    agent_utility,
    arrangement_stats,
    envies,
    stability_report,
    swapped_utility,
)
from .reductions import (
    Family,
    ReducedInstance,
    Roles,
    expected_shape,
    extract_path,
    forward_witness,
    reduce,
)
from .solver import (
    SolveOutcome,
    Status,
    enumerate_arrangements,
    is_envy_free,
    is_exchange_stable,
    solve_envy_free,
    solve_exchange_stable,
    swap_dynamics,
)

__all__ = [
    "Arrangement",
    "CapacityError",
    "ConstructionError",
    "Digraph",
    "ExtractionError",
    "Family",
    "PreferenceProfile",
    "ReducedInstance",
    "Roles",
    "Seat",
    "SeatGraph",
    "SolveOutcome",
    "StabilityReport",
    "Status",
    "add_universal_sink",
    "agent_utility",
    "arrangement_stats",
    "enumerate_arrangements",
    "envies",
    "expected_shape",
    "extract_path",
    "forward_witness",
    "hamiltonian_path",
    "has_universal_sink",
    "is_envy_free",
    "is_exchange_stable",
    "is_hamiltonian_path",
    "random_digraph",
    "reduce",
    "solve_envy_free",
    "solve_exchange_stable",
    "stability_report",
    "swap_dynamics",
    "swapped_utility",
]
