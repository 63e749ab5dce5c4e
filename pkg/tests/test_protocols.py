import math
from fractions import Fraction as F
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlocal.checker import check_philocal
from qlocal.errors import InputError
from qlocal.graph import cycle_graph
from qlocal.outcomes import Distribution, Outcome, min_solution_probability
from qlocal.protocols import coloring, edge_selection as es, fairness, mod4, registry
from qlocal.runtime import LOCAL, run_once

from oracles import all_pairs_distances, mod4_oracle, naive_view

# modulo-4 sum ------------------------------------------------------------------


def test_mod4_examples():
    assert mod4.mod4_valid((0, 0, 0), (0, 1, 1))
    assert not mod4.mod4_valid((0, 0, 0), (1, 1, 1))
    assert mod4.mod4_valid((1, 1, 0), (0, 0, 1))


def test_mod4_predicate_matches_definition():
    for x in mod4.MOD4_INPUTS:
        for y in product((0, 1), repeat=3):
            assert mod4.mod4_valid(x, y) == mod4_oracle(x, y)
    assert {sum(g.labels) for g in mod4.mod4_problem().inputs} == {0, 2}


def test_ghz_runtime_matches_bare_circuit():
    p = mod4.ghz_protocol()
    for g in p.inputs:
        d = p.exact(g)
        assert d == mod4.ghz_circuit_distribution(g.labels)
        parity = sum(g.labels) // 2
        assert d == Distribution.uniform([y for y in product((0, 1), repeat=3) if sum(y) % 2 == parity])


def test_separable_impossibility_and_sanity_inversions():
    assert mod4.mod4_separable_impossibility() is True
    assert mod4.mod4_separable_impossibility(lambda x, y: True) is False
    assert mod4.mod4_separable_impossibility(inputs=[(0, 0, 0)]) is False


# subdivided star ---------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 3])
def test_star_shape(k):
    g = mod4.star_graph(k, (0, 1, 1))
    assert g.n == 3 * k + 1 and g.degree(0) == 3
    d = all_pairs_distances(g)
    for leaf in mod4.star_leaves(k):
        assert g.degree(leaf) == 1 and d[0][leaf] == k
    with pytest.raises(InputError):
        mod4.star_graph(0, (0, 0, 0))


@pytest.mark.parametrize("k", [1, 2])
def test_star_solved_with_certainty(outcome_of, k):
    o = outcome_of("star-k", k=k)
    assert min_solution_probability(o, mod4.star_problem(k)) == 1


@pytest.mark.parametrize("k", [1, 2])
def test_teleport_variant_matches_quantum_channel(outcome_of, k):
    assert outcome_of("star-k-teleport", k=k) == outcome_of("star-k", k=k)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_star_deterministic_bound(k):
    assert mod4.star_deterministic_impossibility(k, 2 * k - 1)
    assert not mod4.star_deterministic_impossibility(k, 2 * k)


def test_star_leaf_views_hide_other_inputs():
    # independent of the exhaustion: at 2k-1 a leaf sees no other leaf
    for k in (1, 2):
        inputs = mod4.star_problem(k).inputs
        for leaf in mod4.star_leaves(k):
            seen = {v for v, _ in naive_view(inputs[0], [leaf], 2 * k - 1)[2]}
            assert seen & set(mod4.star_leaves(k)) == {leaf}


# edge selection ----------------------------------------------------------------


def test_pi_examples():
    assert es.pi_success((F(1, 3),) * 3) == F(8, 27)
    assert es.pi_success((F(1, 2),) * 4) == F(5, 16)
    assert es.pi_success((F(0),) + (F(3, 4),) * 4) == F(3, 4) ** 4
    for p in [(F(0), F(0)), (F(1, 3), F(4, 5)), (1, 1)]:
        assert es.pi_success(p) == 0
    assert es.pi_brute_force((F(1, 3),) * 3) == F(8, 27)
    assert es.pi_brute_force((1,) * 6) == 0


@pytest.mark.parametrize("bad", [(F(1, 2), F(3, 2)), (-0.1, 0.5), (0.5,)])
def test_pi_rejects_bad_profiles(bad):
    with pytest.raises(InputError):
        es.pi_success(bad)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=2, max_size=10))
def test_pi_matches_brute_force(p):
    assert abs(es.pi_success(p) - es.pi_brute_force(p)) <= 1e-12
    assert abs(float(es.pi_success_array(p)) - es.pi_brute_force(p)) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(0, 1, max_denominator=12), min_size=2, max_size=7))
def test_pi_exact_for_fractions(p):
    assert es.pi_success(p) == es.pi_brute_force(p)


def test_optimal_strategy_examples():
    assert es.optimal_local_strategy(3) == (F(1, 3),) * 3
    assert es.optimal_local_strategy(5) == (F(0),) + (F(3, 4),) * 4
    with pytest.raises(InputError):
        es.optimal_local_strategy(2)
    values = [es.pi_success(es.optimal_local_strategy(n)) for n in range(3, 13)]
    assert all(v < math.exp(-1) for v in values)
    assert values[-1] > values[-2]


@pytest.mark.parametrize("k", range(3, 9))
def test_symmetric_search_never_beats_strategy(k):
    best, arg = es.pi_grid_search(k)
    target = float(es.pi_success(es.optimal_local_strategy(k)))
    assert best <= target + 1e-12
    assert target - best <= 5e-3
    assert es.pi_success(arg) == pytest.approx(best, abs=1e-12)


@pytest.mark.parametrize("k, steps", [(3, 60), (4, 30), (5, 16)])
def test_unrestricted_grid_agrees_with_symmetric_search(k, steps):
    full = es.pi_full_grid_max(k, steps)
    assert full <= float(es.KNOWN_MAXIMA[k]) + 1e-12
    assert full >= es.pi_grid_search(k, F(1, steps))[0] - 1e-12


@pytest.mark.parametrize("n", [3, 4, 5])
def test_profile_runtime_route_equals_formula(n):
    profile = es.optimal_local_strategy(n)
    o = es.profile_protocol(profile).outcome()
    assert min_solution_probability(o, es.edge_selection_problem(n)) == es.pi_success(profile)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_helper_route_equals_extensional_outcome(n):
    o = es.edge_selection_protocol(n).outcome()
    assert o == es.edge_selection_localS(n)
    assert min_solution_probability(o, es.edge_selection_problem(n)) == 1 - F(1, math.comb(n, 2))
    assert all(sum(y) == 2 for g in o.inputs for y in o[g].support)


def test_edge_selection_inputs():
    inputs = es.edge_selection_inputs(4)
    assert len(inputs) == 6
    assert all(len(g.edges) == 5 for g in inputs)
    with pytest.raises(InputError):
        es.edge_selection_inputs(2)


# fairness, ids, consensus ----------------------------------------------------------


def test_fair_outcome_examples():
    le, bp = fairness.fair_outcomes(3)
    (g,) = le.inputs
    assert le[g] == Distribution.uniform([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    le1, bp1 = fairness.fair_outcomes(1)
    assert le1[le1.inputs[0]] == Distribution.point((1,))
    assert bp1[bp1.inputs[0]] == Distribution.uniform([(0,), (1,)])
    for n in (2, 5):
        _, bp = fairness.fair_outcomes(n)
        assert bp[bp.inputs[0]] == Distribution.uniform([(0,) * n, (1,) * n])


@pytest.mark.parametrize("n", [1, 3, 4])
def test_fair_protocols_realize_outcomes(n):
    le, bp = fairness.fair_outcomes(n)
    assert fairness.fair_leader_election_protocol(n).outcome() == le
    assert fairness.fair_bit_picking_protocol(n).outcome() == bp
    for proto in (fairness.fair_leader_election_protocol(n), fairness.fair_bit_picking_protocol(n)):
        assert all(set(values) <= {0, 1} for values, _ in proto.helper.support)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_unique_ids(n):
    p = fairness.unique_ids_protocol(n)
    (g,) = p.inputs
    assert p.exact(g) == Distribution.point(tuple(range(1, n + 1)))
    assert min_solution_probability(p.outcome(), fairness.unique_ids_problem(n)) == 1


@pytest.mark.parametrize("t", [0, 1, 2])
def test_symmetric_graph_defeats_deterministic_ids(t):
    g = fairness.symmetric_graph(4)
    y = run_once(g, fairness.FullInformationProgram(), LOCAL, t, seed=0)
    assert len(set(y)) == 1


def test_consensus_grid_all_fail():
    grid = fairness.consensus_grid()
    assert len(grid) == 25
    assert not any(check_philocal(o, 0) for _, _, o in grid)
    with pytest.raises(InputError):
        fairness.consensus_outcome(F(3, 2), 0)


def test_consensus_fixture_solves_consensus():
    for _, _, o in fairness.consensus_grid():
        assert min_solution_probability(o, fairness.consensus_problem()) == 1
    own = fairness.own_input_protocol().outcome()
    assert min_solution_probability(own, fairness.consensus_problem()) == 0


# 2-coloring -----------------------------------------------------------------------


@pytest.mark.parametrize("n", [4, 6, 8, 10, 12])
def test_two_coloring_family_structure(n):
    family = coloring.two_coloring_family(n)
    assert len(family) >= 4 and len(set(family)) == len(family)
    for g in family:
        assert all(g.degree(v) == 2 for v in range(n))
        assert len(g.labels) == len(set(g.labels))
        c = coloring.bipartition(g)
        assert all(c[u] != c[v] for u, _, v, _ in g.edges)
    rho = coloring.critical_radius(n) - 1
    for u, g in zip(range(n // 2), family[2:]):
        d = all_pairs_distances(g)
        # rewiring flips the parity of the pair's distance
        assert d[u][u + n // 2] % 2 != (n // 2) % 2
        # the pair keeps its plain-cycle view just below the critical radius
        assert naive_view(g, [u, u + n // 2], rho) == naive_view(family[0], [u, u + n // 2], rho)


@pytest.mark.parametrize("n", [6, 8])
def test_two_coloring_threshold(n):
    o = coloring.two_coloring_outcome(n)
    t = coloring.critical_radius(n)
    assert check_philocal(o, t) and not check_philocal(o, t - 1)


def test_two_coloring_errors():
    with pytest.raises(InputError):
        coloring.two_coloring_outcome(7)
    with pytest.raises(InputError):
        coloring.bipartition(cycle_graph(range(5)))


def test_two_coloring_problem_accepts_outcome():
    o = coloring.two_coloring_outcome(6)
    assert min_solution_probability(o, coloring.two_coloring_problem(6)) == 1


# registry -------------------------------------------------------------------------


def test_registry_builds_every_entry():
    for name in registry.REGISTRY:
        b = registry.build(name)
        assert b.inputs
        assert isinstance(b.outcome(), Outcome)


def test_registry_keys_and_errors():
    assert registry.build("ghz-mod4").select((0, 1, 1)).labels == (0, 1, 1)
    assert registry.build("edge-select-s", n=4).select((0, 3)).has_edge(0, 3) is False
    assert registry.build("two-coloring", n=6).select((0,)) == cycle_graph(range(6))
    with pytest.raises(InputError):
        registry.build("no-such")
    with pytest.raises(InputError):
        registry.build("ghz-mod4").select((1, 1, 1))


def test_bundled_protocols_solve_with_stated_probability(outcome_of):
    stated = {
        ("ghz-mod4", ()): 1,
        ("star-k", (("k", 1),)): 1,
        ("edge-select-s", (("n", 4),)): F(5, 6),
        ("fair-le", (("n", 4),)): 1,
        ("fair-bp", (("n", 4),)): 1,
        ("unique-ids", (("n", 3),)): 1,
    }
    for (name, params), want in stated.items():
        b = registry.build(name, **dict(params))
        assert min_solution_probability(outcome_of(name, **dict(params)), b.problem) == want


def test_every_bundled_outcome_passes_at_its_budget(outcome_of):
    for name, params in [("fair-le", {"n": 4}), ("fair-bp", {"n": 4}), ("unique-ids", {"n": 3}), ("edge-select-s", {"n": 4})]:
        b = registry.build(name, **params)
        assert check_philocal(outcome_of(name, **params), b.rounds)
    own = fairness.own_input_protocol()
    assert check_philocal(own.outcome(), own.rounds)


def test_pair_enumeration_in_helper():
    # the helper's support is exactly the edges of K_n, each once
    h = es.edge_selection_protocol(5).helper
    pairs = sorted(tuple(v for v, b in enumerate(values) if b) for values, _ in h.support)
    assert pairs == list(combinations(range(5), 2))
