"""The modulo-4 sum problem, its GHZ solution, and the subdivided-star variant.

Three nodes receive bits ``x`` with ``x1 + x2 + x3`` in ``{0, 2}`` and must
output bits ``y`` with ``2 (y1 + y2 + y3) = x1 + x2 + x3 (mod 4)``.  Sharing
a GHZ triple, each node applies ``diag(1, i**x)`` and a Hadamard to its qubit
and measures: the collected phase ``i**(x1+x2+x3) = ±1`` fixes the parity of
the measured bits, which is exactly the required condition.
"""

from __future__ import annotations

from collections.abc import Sequence
from itertools import product
from typing import Callable

from .. import quantum as qm
from ..checker import view_classes
from ..errors import InputError
from ..graph import LabeledGraph, empty_graph
from ..outcomes import Distribution, Problem
from ..runtime import (
    LOCAL_E,
    LOCAL_Q,
    Broadcast,
    ClassicalHelper,
    NodeProgram,
    Protocol,
    make_entangled_helper,
)

MOD4_INPUTS = ((0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0))

# non-leaf role labels on the subdivided star
CENTER, RELAY = 2, 3


def mod4_valid(x: Sequence[int], y: Sequence[int]) -> bool:
    return all(b in (0, 1) for b in y) and (2 * sum(y) - sum(x)) % 4 == 0


def mod4_problem() -> Problem:
    inputs = tuple(empty_graph(x) for x in MOD4_INPUTS)
    return Problem("mod4-sum", lambda g, y: mod4_valid(g.labels, y), inputs)


class GHZProgram(NodeProgram):
    """Phase ``i**x``, Hadamard, measure; everything happens in round 0."""

    def init(self, node):
        (q,) = node.qubits
        node.apply(qm.phase(node.label), q)
        node.apply(qm.H, q)
        return node.measure(q)

    def output(self, node, state, inbox):
        return state


def ghz_protocol() -> Protocol:
    helper = make_entangled_helper(qm.prepare_ghz(3, (0, 1, 2)), 3)
    return Protocol("ghz-mod4", GHZProgram(), LOCAL_E, 0, helper, mod4_problem().inputs)


def ghz_circuit_distribution(x: Sequence[int]) -> Distribution:
    """The GHZ protocol as a bare circuit, read out by :func:`quantum.exact_distribution`."""
    state = qm.prepare_ghz(3, (0, 1, 2))
    for q, xv in enumerate(x):
        state = qm.apply_gate(state, qm.phase(xv), (q,))
        state = qm.apply_gate(state, qm.H, (q,))
    return qm.exact_distribution(state, 3)


def mod4_separable_impossibility(
    valid: Callable[[Sequence[int], Sequence[int]], bool] = mod4_valid,
    inputs: Sequence[Sequence[int]] = MOD4_INPUTS,
) -> bool:
    """True iff no triple of functions ``Y_i: {0,1} -> {0,1}`` is valid on every input."""
    tables = list(product((0, 1), repeat=2))  # (Y(0), Y(1))
    for y1, y2, y3 in product(tables, repeat=3):
        if all(valid(x, (y1[x[0]], y2[x[1]], y3[x[2]])) for x in inputs):
            return False
    return True


# subdivided star ------------------------------------------------------------


def star_leaves(k: int) -> tuple[int, int, int]:
    return (k, 2 * k, 3 * k)


def star_graph(k: int, x: Sequence[int]) -> LabeledGraph:
    """Center 0 with three paths of ``k`` edges; leaf ``j`` gets input ``x[j]``.

    Path ``j`` is ``1 + j*k, ..., (j + 1)*k``; the center's port ``j + 1``
    leads into path ``j``.  Non-leaf nodes carry role labels.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    n = 3 * k + 1
    edges = [(0, 1 + j * k) for j in range(3)]
    edges += [(1 + j * k + i, 2 + j * k + i) for j in range(3) for i in range(k - 1)]
    labels = [RELAY] * n
    labels[0] = CENTER
    for leaf, xv in zip(star_leaves(k), x):
        labels[leaf] = xv
    return LabeledGraph.from_edges(n, edges, labels)


def star_problem(k: int) -> Problem:
    leaves = star_leaves(k)
    inputs = tuple(star_graph(k, x) for x in MOD4_INPUTS)

    def valid(g: LabeledGraph, y) -> bool:
        return mod4_valid([g.labels[v] for v in leaves], [y[v] for v in leaves])

    return Problem(f"star-mod4-k{k}", valid, inputs)


def _ghz_readout(node, q: int) -> int:
    node.apply(qm.phase(node.label), q)
    node.apply(qm.H, q)
    return node.measure(q)


class StarProgram(NodeProgram):
    """Center builds a GHZ triple in round 1; relays forward qubits one hop per round."""

    def round(self, node, state, r, inbox):
        if node.label == CENTER and r == 1:
            a, b, c = node.alloc(3)
            node.apply(qm.H, a)
            node.apply(qm.CNOT, a, b)
            node.apply(qm.CNOT, a, c)
            for port, q in enumerate((a, b, c), start=1):
                node.send_qubit(port, q)
        elif node.label == RELAY:
            for port, qs in node.arrivals.items():
                for q in qs:
                    node.send_qubit(3 - port, q)
        return state, {}

    def output(self, node, state, inbox):
        if node.label in (0, 1) and node.qubits:
            return _ghz_readout(node, node.qubits[0])
        return 0


def star_protocol(k: int) -> Protocol:
    return Protocol(f"star-k{k}", StarProgram(), LOCAL_Q, k, None, star_problem(k).inputs)


class StarTeleportProgram(NodeProgram):
    """The star protocol over classical links, consuming one Bell pair per edge.

    Round 1 exchanges helper ids so each node can match ports with its Bell
    halves; from round 2 on every hop is a teleportation whose two correction
    bits travel as the round's message.  Needs ``k + 1`` rounds.
    """

    def init(self, node):
        my_id, pairs = node.helper
        return {"id": my_id, "pairs": dict(pairs), "ports": {}}

    def round(self, node, state, r, inbox):
        if r == 1:
            return state, Broadcast(state["id"])
        if r == 2:
            state["ports"] = dict(inbox)
            if node.label == CENTER:
                a, b, c = node.alloc(3)
                node.apply(qm.H, a)
                node.apply(qm.CNOT, a, b)
                node.apply(qm.CNOT, a, c)
                return state, {p: self._send(node, state, p, q) for p, q in zip((1, 2, 3), (a, b, c))}
            return state, {}
        if node.label == RELAY and inbox:
            ((port, bits),) = inbox.items()
            q = self._receive(node, state, port, bits)
            return state, {3 - port: self._send(node, state, 3 - port, q)}
        return state, {}

    def output(self, node, state, inbox):
        if node.label not in (0, 1) or not inbox:
            return 0
        ((port, bits),) = inbox.items()
        return _ghz_readout(node, self._receive(node, state, port, bits))

    @staticmethod
    def _send(node, state, port: int, q: int) -> tuple[int, int]:
        a = state["pairs"][state["ports"][port]]
        node.apply(qm.CNOT, q, a)
        node.apply(qm.H, q)
        return node.measure(q), node.measure(a)

    @staticmethod
    def _receive(node, state, port: int, bits: tuple[int, int]) -> int:
        b = state["pairs"][state["ports"][port]]
        m_src, m_a = bits
        if m_a:
            node.apply(qm.X, b)
        if m_src:
            node.apply(qm.Z, b)
        return b


def star_teleport_protocol(k: int) -> Protocol:
    """Entangled initialization with a Bell pair on every star edge; classical links."""
    g = star_graph(k, MOD4_INPUTS[0])
    edges = sorted((u, v) for u, _, v, _ in g.edges)
    state = qm.bell_pairs(edges)
    tables: list[dict[int, int]] = [{} for _ in range(g.n)]
    for i, (u, v) in enumerate(edges):
        tables[u][v + 1] = 2 * i
        tables[v][u + 1] = 2 * i + 1
    values = [(v + 1, tuple(sorted(tables[v].items()))) for v in range(g.n)]
    helper = make_entangled_helper(state, g.n, ClassicalHelper.point(values))
    return Protocol(f"star-k{k}-teleport", StarTeleportProgram(), LOCAL_E, k + 1, helper, star_problem(k).inputs)


def star_deterministic_impossibility(k: int, t: int) -> bool:
    """True iff no deterministic plain-LOCAL rule solves the star problem at radius ``t``.

    A deterministic leaf output is a function of the leaf's distance-``t``
    view.  Grouping the four inputs by each leaf's view and trying every
    assignment of output bits to view classes exhausts all such rules.
    """
    problem = star_problem(k)
    inputs = problem.inputs
    leaves = star_leaves(k)
    class_of = []
    for leaf in leaves:
        index = {}
        for c, members in enumerate(view_classes(inputs, [leaf], t)):
            for i in members:
                index[i] = c
        class_of.append(index)
    sizes = [len(set(ix.values())) for ix in class_of]
    n = inputs[0].n
    for tables in product(*(product((0, 1), repeat=s) for s in sizes)):
        ok = True
        for i, g in enumerate(inputs):
            y = [0] * n
            for leaf, table, ix in zip(leaves, tables, class_of):
                y[leaf] = table[ix[i]]
            if not problem(g, y):
                ok = False
                break
        if ok:
            return False
    return True
