"""Labeled port-numbered graphs and distance-t local views.

Nodes are the integers ``0 .. n-1``.  Every node numbers its incident edges
with ports ``1 .. degree``; an edge is stored as ``(u, pu, v, pv)`` with
``u < v`` so that edge sets compare by value.

The view of a node set ``S`` after ``t`` rounds contains every node within
distance ``t`` of ``S`` together with its label, and every edge that has at
least one endpoint within distance ``t - 1``.  Edges joining two nodes at
distance exactly ``t`` stay invisible, and a zero-round view holds the
roots' labels and nothing else (not even degrees).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InputError

Edge = tuple[int, int, int, int]


def _norm_edge(u: int, pu: int, v: int, pv: int) -> Edge:
    return (u, pu, v, pv) if u < v else (v, pv, u, pu)


@dataclass(frozen=True)
class LabeledGraph:
    """Immutable labeled graph with port numbering.

    ``ports[v][p - 1]`` is ``(w, q)``: port ``p`` of ``v`` leads to node
    ``w``, where the same edge has port ``q``.  Use :meth:`from_edges` or
    :meth:`from_port_edges` rather than the raw constructor.
    """

    n: int
    ports: tuple[tuple[tuple[int, int], ...], ...]
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InputError(f"node count must be positive, got {self.n}")
        if len(self.ports) != self.n or len(self.labels) != self.n:
            raise InputError("ports and labels must cover every node")
        seen: set[tuple[int, int]] = set()
        for v, row in enumerate(self.ports):
            for p, (w, q) in enumerate(row, start=1):
                if not 0 <= w < self.n:
                    raise InputError(f"port {p} of node {v} leads to unknown node {w}")
                if w == v:
                    raise InputError(f"self-loop at node {v}")
                if not 1 <= q <= len(self.ports[w]) or self.ports[w][q - 1] != (v, p):
                    raise InputError(f"port {p} of node {v} has no matching port at node {w}")
                if (v, w) in seen:
                    raise InputError(f"duplicate edge {{{v}, {w}}}")
                seen.add((v, w))
        for v, x in enumerate(self.labels):
            if not isinstance(x, int) or x < 0:
                raise InputError(f"label of node {v} must be a non-negative integer, got {x!r}")

    # construction ---------------------------------------------------------

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[int] | None = None
    ) -> LabeledGraph:
        """Build a graph, numbering ports at each node in order of appearance."""
        rows: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge {{{u}, {v}}} references an unknown node")
            pu, pv = len(rows[u]) + 1, len(rows[v]) + 1
            rows[u].append((v, pv))
            rows[v].append((u, pu))
        labels = tuple(labels) if labels is not None else (0,) * n
        return cls(n, tuple(tuple(r) for r in rows), tuple(int(x) for x in labels))

    @classmethod
    def from_port_edges(
        cls, n: int, edges: Iterable[Edge], labels: Sequence[int] | None = None
    ) -> LabeledGraph:
        """Build a graph from explicit ``(u, pu, v, pv)`` quadruples."""
        slots: list[dict[int, tuple[int, int]]] = [{} for _ in range(n)]
        for u, pu, v, pv in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge {{{u}, {v}}} references an unknown node")
            for a, pa, b, pb in ((u, pu, v, pv), (v, pv, u, pu)):
                if pa in slots[a]:
                    raise InputError(f"port {pa} used twice at node {a}")
                slots[a][pa] = (b, pb)
        rows = []
        for v, slot in enumerate(slots):
            if sorted(slot) != list(range(1, len(slot) + 1)):
                raise InputError(f"ports at node {v} are not 1..{len(slot)}: {sorted(slot)}")
            rows.append(tuple(slot[p] for p in range(1, len(slot) + 1)))
        labels = tuple(labels) if labels is not None else (0,) * n
        return cls(n, tuple(rows), tuple(int(x) for x in labels))

    def with_labels(self, labels: Sequence[int]) -> LabeledGraph:
        return LabeledGraph(self.n, self.ports, tuple(int(x) for x in labels))

    # queries --------------------------------------------------------------

    @property
    def nodes(self) -> range:
        return range(self.n)

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(
            _norm_edge(v, p, w, q)
            for v, row in enumerate(self.ports)
            for p, (w, q) in enumerate(row, start=1)
        )

    def degree(self, v: int) -> int:
        return len(self.ports[v])

    def neighbor(self, v: int, port: int) -> tuple[int, int]:
        """Return ``(w, q)`` reached from ``v`` through ``port``."""
        if not 1 <= port <= len(self.ports[v]):
            raise InputError(f"node {v} has no port {port}")
        return self.ports[v][port - 1]

    def has_edge(self, u: int, v: int) -> bool:
        return any(w == v for w, _ in self.ports[u])

    def distances(self, roots: Iterable[int]) -> dict[int, int]:
        """Multi-source BFS distances; unreachable nodes are absent."""
        dist: dict[int, int] = {}
        queue: deque[int] = deque()
        for r in roots:
            if r not in dist:
                dist[r] = 0
                queue.append(r)
        while queue:
            v = queue.popleft()
            for w, _ in self.ports[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist


@dataclass(frozen=True)
class ViewBall:
    """What the node set ``roots`` can have learned after ``radius`` rounds."""

    roots: frozenset[int]
    radius: int
    nodes: frozenset[tuple[int, int]]  # (node, label)
    edges: frozenset[Edge]

    @property
    def seen_nodes(self) -> frozenset[int]:
        return frozenset(v for v, _ in self.nodes)

    @property
    def labels(self) -> dict[int, int]:
        return dict(self.nodes)


def view(graph: LabeledGraph, roots: Iterable[int], t: int) -> ViewBall:
    """Distance-``t`` local view of ``roots`` in ``graph``."""
    roots = frozenset(roots)
    if not roots:
        raise InputError("view needs at least one root")
    bad = sorted(r for r in roots if not (isinstance(r, int) and 0 <= r < graph.n))
    if bad:
        raise InputError(f"unknown root node(s) {bad}")
    if t < 0:
        raise InputError(f"radius must be non-negative, got {t}")

    dist = graph.distances(roots)
    inside = {v for v, d in dist.items() if d <= t}
    nodes = frozenset((v, graph.labels[v]) for v in inside)
    edges = frozenset(
        _norm_edge(v, p, w, q)
        for v in inside
        if dist[v] <= t - 1
        for p, (w, q) in enumerate(graph.ports[v], start=1)
    )
    return ViewBall(roots, t, nodes, edges)


def views_equal(a: ViewBall, b: ViewBall) -> bool:
    # identity over a fixed node set, not isomorphism
    return a == b


# generators ---------------------------------------------------------------


def empty_graph(labels: Sequence[int]) -> LabeledGraph:
    return LabeledGraph.from_edges(len(labels), (), labels)


def path_graph(n: int, labels: Sequence[int] | None = None) -> LabeledGraph:
    return LabeledGraph.from_edges(n, ((i, i + 1) for i in range(n - 1)), labels)


def cycle_graph(order: Sequence[int], labels: Sequence[int] | None = None) -> LabeledGraph:
    """Cycle visiting the nodes in ``order``.

    Port 1 of every node leads to its successor along ``order`` and port 2
    to its predecessor, so a reversed order swaps the two ports everywhere.
    """
    n = len(order)
    if n < 3 or sorted(order) != list(range(n)):
        raise InputError("cycle order must be a permutation of 0..n-1 with n >= 3")
    edges = [(order[i], 1, order[(i + 1) % n], 2) for i in range(n)]
    return LabeledGraph.from_port_edges(n, edges, labels if labels is not None else range(n))


def complete_graph_minus_edge(n: int, missing: tuple[int, int], labels: Sequence[int] | None = None) -> LabeledGraph:
    a, b = sorted(missing)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) != (a, b)]
    return LabeledGraph.from_edges(n, pairs, labels)


# text format --------------------------------------------------------------


def parse_graph(text: str) -> LabeledGraph:
    """Parse ``nodes <n>`` / ``label <v> <x>`` / ``edge <u> <pu> <v> <pv>`` lines."""
    n: int | None = None
    labels: dict[int, int] = {}
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "nodes" and len(parts) == 2:
                if n is not None:
                    raise InputError("repeated 'nodes' line")
                n = int(parts[1])
            elif parts[0] == "label" and len(parts) == 3:
                v, x = int(parts[1]), int(parts[2])
                if v in labels:
                    raise InputError(f"node {v} labeled twice")
                labels[v] = x
            elif parts[0] == "edge" and len(parts) == 5:
                u, pu, v, pv = map(int, parts[1:])
                edges.append((u, pu, v, pv))
            else:
                raise InputError(f"unrecognized line {line!r}")
        except (InputError, ValueError) as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    if n is None:
        raise InputError("missing 'nodes <n>' line")
    if sorted(labels) != list(range(n)):
        raise InputError(f"labels must be given for exactly the nodes 0..{n - 1}")
    return LabeledGraph.from_port_edges(n, edges, [labels[v] for v in range(n)])


def format_graph(graph: LabeledGraph) -> str:
    lines = [f"nodes {graph.n}"]
    lines += [f"label {v} {x}" for v, x in enumerate(graph.labels)]
    lines += [f"edge {u} {pu} {v} {pv}" for u, pu, v, pv in sorted(graph.edges)]
    return "\n".join(lines) + "\n"


def relabel(graph: LabeledGraph, labels: Mapping[int, int]) -> LabeledGraph:
    """Copy of ``graph`` with the labels of some nodes replaced."""
    new = list(graph.labels)
    for v, x in labels.items():
        new[v] = x
    return graph.with_labels(new)
