"""Name-addressable bundles of problems, protocols and outcomes."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import InputError
from ..graph import LabeledGraph
from ..outcomes import Outcome, Problem
from ..runtime import Protocol
from . import coloring, edge_selection, fairness, mod4


@dataclass(frozen=True)
class Bundle:
    """A problem together with either a runnable protocol or a fixed outcome.

    ``key`` maps an input graph to the short tuple users type to pick it
    (leaf inputs for the star, the missing edge for edge selection, ...).
    """

    name: str
    problem: Problem | None
    protocol: Protocol | None = None
    fixed: Outcome | None = None
    key: Callable[[LabeledGraph], tuple[int, ...]] = field(default=lambda g: g.labels, compare=False)
    quantum: bool = False

    @property
    def inputs(self) -> tuple[LabeledGraph, ...]:
        if self.protocol is not None:
            return self.protocol.inputs
        return self.fixed.inputs if self.fixed is not None else self.problem.inputs

    @property
    def rounds(self) -> int | None:
        return self.protocol.rounds if self.protocol is not None else None

    def outcome(self) -> Outcome:
        if self.protocol is not None:
            return self.protocol.outcome()
        return self.fixed

    def select(self, key: Sequence[int]) -> LabeledGraph:
        key = tuple(key)
        for g in self.inputs:
            if tuple(self.key(g)) == key:
                return g
        known = ", ".join(",".join(map(str, self.key(g))) for g in self.inputs)
        raise InputError(f"{self.name}: no input {key}; known inputs: {known}")


@dataclass(frozen=True)
class Entry:
    name: str
    summary: str
    params: tuple[str, ...]
    build: Callable[..., Bundle]


def _ghz(**_) -> Bundle:
    return Bundle("ghz-mod4", mod4.mod4_problem(), mod4.ghz_protocol(), quantum=True)


def _star_key(k: int):
    leaves = mod4.star_leaves(k)
    return lambda g: tuple(g.labels[v] for v in leaves)


def _star(k: int = 1, **_) -> Bundle:
    return Bundle(f"star-k{k}", mod4.star_problem(k), mod4.star_protocol(k), key=_star_key(k), quantum=True)


def _star_teleport(k: int = 1, **_) -> Bundle:
    return Bundle(
        f"star-k{k}-teleport", mod4.star_problem(k), mod4.star_teleport_protocol(k), key=_star_key(k), quantum=True
    )


def _missing_edge(g: LabeledGraph) -> tuple[int, int]:
    return next((u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v))


def _edge_select(n: int = 4, **_) -> Bundle:
    return Bundle(
        f"edge-select-s-n{n}",
        edge_selection.edge_selection_problem(n),
        edge_selection.edge_selection_protocol(n),
        key=_missing_edge,
    )


def _two_coloring(n: int = 6, **_) -> Bundle:
    family = coloring.two_coloring_family(n)
    return Bundle(
        f"two-coloring-n{n}",
        coloring.two_coloring_problem(n),
        fixed=coloring.two_coloring_outcome(n),
        key=lambda g: (family.index(g),),
    )


def _consensus(p: Fraction = Fraction(1), q: Fraction = Fraction(0), **_) -> Bundle:
    return Bundle(f"consensus-p{p}-q{q}", fairness.consensus_problem(), fixed=fairness.consensus_outcome(p, q))


def _fair_le(n: int = 4, **_) -> Bundle:
    return Bundle(
        f"fair-le-n{n}", fairness.fair_leader_election_problem(n), fairness.fair_leader_election_protocol(n)
    )


def _fair_bp(n: int = 4, **_) -> Bundle:
    return Bundle(f"fair-bp-n{n}", fairness.fair_bit_picking_problem(n), fairness.fair_bit_picking_protocol(n))


def _unique_ids(n: int = 3, **_) -> Bundle:
    return Bundle(f"unique-ids-n{n}", fairness.unique_ids_problem(n), fairness.unique_ids_protocol(n))


REGISTRY: dict[str, Entry] = {
    e.name: e
    for e in (
        Entry("ghz-mod4", "GHZ triple solves the modulo-4 sum in 0 rounds (LOCAL+E)", (), _ghz),
        Entry("star-k", "subdivided star, qubits forwarded over quantum links in k rounds (LOCAL+Q)", ("k",), _star),
        Entry(
            "star-k-teleport",
            "subdivided star over classical links with a Bell pair per edge, k+1 rounds (LOCAL+E)",
            ("k",),
            _star_teleport,
        ),
        Entry("edge-select-s", "separable helper pre-selects a random edge of K_n (LOCAL+S)", ("n",), _edge_select),
        Entry("two-coloring", "fair 2-coloring outcome over rewired even cycles", ("n",), _two_coloring),
        Entry("consensus-grid", "two-node consensus outcome with parameters p, q", ("p", "q"), _consensus),
        Entry("fair-le", "fair leader election from one helper bit per node (LOCAL+S)", ("n",), _fair_le),
        Entry("fair-bp", "fair bit picking from one helper bit per node (LOCAL+S)", ("n",), _fair_bp),
        Entry("unique-ids", "ids from the separable helper (LOCAL+S)", ("n",), _unique_ids),
    )
}


def build(name: str, **params) -> Bundle:
    """Instantiate a registered bundle; unset parameters take their defaults."""
    try:
        entry = REGISTRY[name]
    except KeyError:
        raise InputError(f"unknown protocol {name!r}; try one of {', '.join(REGISTRY)}") from None
    given = {k: v for k, v in params.items() if v is not None and k in entry.params}
    return entry.build(**given)


def quantum_bundles() -> list[Bundle]:
    """Every bundled quantum protocol at the sizes the acceptance suite uses."""
    return [_ghz(), _star(1), _star(2), _star_teleport(1), _star_teleport(2)]
