"""2-coloring an even cycle, as an extensional outcome over rewired cycles.

All inputs live on the same node set; what changes is the Hamiltonian cycle
through it.  Alongside the plain cycle and its reversal, every antipodal
pair ``(u, u + n/2)`` gets a rewired cycle in which the two nodes keep their
radius-``ρ`` views, ``ρ = ⌈(n-2)/4⌉ - 1``, while their distance changes
parity.  The fair outcome (each proper coloring with probability 1/2) then
cannot pass at radius ``ρ``.
"""

from __future__ import annotations

import math
from collections import deque

from ..errors import InputError
from ..graph import LabeledGraph, cycle_graph
from ..outcomes import Distribution, Outcome, Problem


def critical_radius(n: int) -> int:
    """Smallest radius at which the fair 2-coloring outcome passes: ``⌈(n-2)/4⌉``."""
    return math.ceil((n - 2) / 4)


def _check_even(n: int) -> None:
    if n < 4 or n % 2:
        raise InputError(f"need an even cycle length >= 4, got {n}")


def rewired_order(n: int, u: int) -> list[int]:
    """Cycle order through ``0..n-1`` flipping the parity of the distance from ``u`` to ``u + n/2``."""
    _check_even(n)
    rho = critical_radius(n) - 1
    order = list(range(u, n)) + list(range(u))
    moved = order.pop(n - rho - 1)
    order.insert(n // 2 - rho, moved)
    return order


def two_coloring_family(n: int) -> tuple[LabeledGraph, ...]:
    """Plain cycle, its reversal, and one rewired cycle per antipodal pair.

    In the rewired input for ``(u, u + n/2)`` only the nodes within radius
    ``ρ`` of the pair keep their own ids as labels; every other node gets a
    fresh label, so the only views it shares with the plain cycle are those
    of subsets near the pair.
    """
    _check_even(n)
    rho = critical_radius(n) - 1
    family = [cycle_graph(list(range(n))), cycle_graph(list(reversed(range(n))))]
    for u in range(n // 2):
        g = cycle_graph(rewired_order(n, u))
        near = {v for v, d in g.distances([u, u + n // 2]).items() if d <= rho}
        i = len(family)
        labels = [v if v in near else v + n * i for v in range(n)]
        family.append(g.with_labels(labels))
    return tuple(family)


def bipartition(g: LabeledGraph) -> tuple[int, ...]:
    """BFS 2-coloring with node 0 colored 0; InputError if ``g`` is not bipartite."""
    color = [-1] * g.n
    for root in range(g.n):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w, _ in g.ports[v]:
                if color[w] < 0:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    raise InputError("graph is not bipartite")
    return tuple(color)


def two_coloring_outcome(n: int) -> Outcome:
    pairs = []
    for g in two_coloring_family(n):
        c = bipartition(g)
        pairs.append((g, Distribution.uniform([c, tuple(1 - b for b in c)])))
    return Outcome(pairs)


def two_coloring_problem(n: int) -> Problem:
    def valid(g: LabeledGraph, y) -> bool:
        return all(b in (0, 1) for b in y) and all(y[u] != y[v] for u, _, v, _ in g.edges)

    return Problem(f"two-coloring-n{n}", valid, two_coloring_family(n))
