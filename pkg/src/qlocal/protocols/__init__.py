"""Concrete problems, protocols and outcomes."""

from .coloring import critical_radius, two_coloring_family, two_coloring_outcome, two_coloring_problem
from .edge_selection import (
    edge_selection_inputs,
    edge_selection_localS,
    edge_selection_problem,
    edge_selection_protocol,
    optimal_local_strategy,
    pi_brute_force,
    pi_grid_search,
    pi_success,
)
from .fairness import (
    consensus_grid,
    consensus_outcome,
    consensus_problem,
    fair_bit_picking_protocol,
    fair_leader_election_protocol,
    fair_outcomes,
    unique_ids_problem,
    unique_ids_protocol,
)
from .mod4 import (
    ghz_protocol,
    mod4_problem,
    mod4_separable_impossibility,
    star_deterministic_impossibility,
    star_graph,
    star_problem,
    star_protocol,
    star_teleport_protocol,
)
from .registry import REGISTRY, Bundle, build
