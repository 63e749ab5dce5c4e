"""Symmetry breaking with helpers: fair leader election, fair bit picking,
unique identifiers, and the two-node consensus fixture."""

from __future__ import annotations

import zlib
from fractions import Fraction

from ..errors import InputError
from ..graph import LabeledGraph, cycle_graph, empty_graph
from ..outcomes import Distribution, Outcome, Problem, merge_duplicates
from ..runtime import LOCAL, LOCAL_S, Broadcast, ClassicalHelper, NodeProgram, Protocol, make_separable_helper
from .edge_selection import HelperEchoProgram


def _check_n(n: int) -> None:
    if n < 1:
        raise InputError("need at least one node")


def _one_hot(n: int) -> list[tuple[int, ...]]:
    return [tuple(int(v == w) for w in range(n)) for v in range(n)]


def fair_leader_election_problem(n: int) -> Problem:
    _check_n(n)
    return Problem(
        f"fair-le-n{n}",
        lambda g, y: all(b in (0, 1) for b in y) and sum(y) == 1,
        (empty_graph([0] * n),),
    )


def fair_bit_picking_problem(n: int) -> Problem:
    _check_n(n)
    return Problem(
        f"fair-bp-n{n}",
        lambda g, y: len(set(y)) == 1 and y[0] in (0, 1),
        (empty_graph([0] * n),),
    )


def fair_leader_election_protocol(n: int) -> Protocol:
    """One helper bit per node: 1 at a uniformly chosen leader."""
    _check_n(n)
    helper = ClassicalHelper.uniform(_one_hot(n))
    return Protocol(f"fair-le-n{n}", HelperEchoProgram(), LOCAL_S, 0, helper, fair_leader_election_problem(n).inputs)


def fair_bit_picking_protocol(n: int) -> Protocol:
    """One helper bit per node, the same fair coin everywhere."""
    _check_n(n)
    helper = ClassicalHelper.uniform([(0,) * n, (1,) * n])
    return Protocol(f"fair-bp-n{n}", HelperEchoProgram(), LOCAL_S, 0, helper, fair_bit_picking_problem(n).inputs)


def fair_outcomes(n: int) -> tuple[Outcome, Outcome]:
    """Leader-election and bit-picking outcomes, built directly from their definitions."""
    _check_n(n)
    g = empty_graph([0] * n)
    le = Distribution.uniform(_one_hot(n))
    bp = Distribution.uniform([(0,) * n, (1,) * n])
    return Outcome([(g, le)]), Outcome([(g, bp)])


# unique identifiers -------------------------------------------------------


def symmetric_graph(n: int) -> LabeledGraph:
    """A vertex-transitive port-numbered graph on ``n`` nodes, all labels 0."""
    _check_n(n)
    if n == 1:
        return empty_graph([0])
    if n == 2:
        return LabeledGraph.from_edges(2, [(0, 1)], [0, 0])
    return cycle_graph(list(range(n)), [0] * n)


def unique_ids_problem(n: int) -> Problem:
    def valid(g: LabeledGraph, y) -> bool:
        return sorted(y) == list(range(1, g.n + 1))

    return Problem(f"unique-ids-n{n}", valid, (symmetric_graph(n),))


class IdProgram(NodeProgram):
    def output(self, node, state, inbox):
        return node.helper.id


def unique_ids_protocol(n: int) -> Protocol:
    return Protocol(f"unique-ids-n{n}", IdProgram(), LOCAL_S, 0, make_separable_helper(n), unique_ids_problem(n).inputs)


class FullInformationProgram(NodeProgram):
    """Deterministic: gathers everything it can hear and outputs a hash of it.

    The output is a function of the node's view, so nodes with equal views
    always agree.
    """

    def init(self, node):
        return (node.label,)

    def round(self, node, state, r, inbox):
        state = (state, node.degree, tuple(sorted(inbox.items())))
        if node.degree is None:
            return state, None if r > 1 else Broadcast(state)
        return state, {p: (p, state) for p in range(1, node.degree + 1)}

    def output(self, node, state, inbox):
        final = (state, node.degree, tuple(sorted(inbox.items())))
        return zlib.crc32(repr(final).encode()) & 0xFFFF


# consensus ----------------------------------------------------------------

CONSENSUS_INPUTS = ((0, 0), (0, 1), (1, 0), (1, 1))


def consensus_inputs() -> tuple[LabeledGraph, ...]:
    return tuple(LabeledGraph.from_edges(2, [(0, 1)], x) for x in CONSENSUS_INPUTS)


def consensus_problem() -> Problem:
    def valid(g: LabeledGraph, y) -> bool:
        return len(set(y)) == 1 and y[0] in g.labels

    return Problem("consensus", valid, consensus_inputs())


def consensus_outcome(p: Fraction, q: Fraction) -> Outcome:
    """The only shape a certain two-node consensus outcome can take.

    ``(0,1)`` decides 0 with probability ``p``; ``(1,0)`` decides 0 with
    probability ``q``; agreeing inputs decide their common value.
    """
    p, q = Fraction(p), Fraction(q)
    if not (0 <= p <= 1 and 0 <= q <= 1):
        raise InputError("p and q must lie in [0, 1]")

    def split(a: Fraction) -> Distribution:
        return merge_duplicates([((0, 0), a), ((1, 1), 1 - a)])

    dists = [Distribution.point((0, 0)), split(p), split(q), Distribution.point((1, 1))]
    return Outcome(zip(consensus_inputs(), dists))


def consensus_grid(step: Fraction = Fraction(1, 4)) -> list[tuple[Fraction, Fraction, Outcome]]:
    steps = int(1 / Fraction(step))
    pts = [Fraction(i, steps) for i in range(steps + 1)]
    return [(p, q, consensus_outcome(p, q)) for p in pts for q in pts]


class OwnInputProgram(NodeProgram):
    """Zero-round consensus attempt: decide your own input."""

    def output(self, node, state, inbox):
        return node.label


def own_input_protocol() -> Protocol:
    return Protocol("consensus-own-input", OwnInputProgram(), LOCAL, 0, None, consensus_inputs())
