"""Selecting an edge of ``K_n`` minus one edge, with and without helpers.

Without communication a node can only output 1 with some fixed probability
``1 - p_i`` of its own.  For ``p_1 <= ... <= p_k`` (nodes that never output
1 left out) the worst input removes the edge ``{1, 2}``, and the success
probability is that of exactly two successes among ``k`` independent
trials, excluding the pair ``{1, 2}``.  A separable helper that picks a
uniformly random edge of ``K_n`` in advance does far better.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from ..errors import InputError
from ..graph import LabeledGraph, complete_graph_minus_edge
from ..outcomes import Distribution, Outcome, Prob, Problem
from ..runtime import LOCAL, LOCAL_S, ClassicalHelper, NodeProgram, Protocol


def _check_profile(p: Sequence[Prob]) -> list[Prob]:
    p = list(p)
    if len(p) < 2:
        raise InputError("a strategy profile needs at least two nodes")
    for v in p:
        if not 0 <= v <= 1:
            raise InputError(f"probability {v} outside [0, 1]")
    return p


def pi_success(p: Sequence[Prob]) -> Prob:
    """Success probability of the zero-round profile ``p`` on its worst input.

    Expanded form: the probability of exactly two 1-outputs minus that of the
    pair ``{1, 2}``.  Only products of ``p_i`` and ``1 - p_i`` appear, so
    ``p_i = 0`` needs no limit argument.  Exact for fractions.
    """
    p = _check_profile(p)
    zero, one = (Fraction(0), Fraction(1)) if all(isinstance(v, (Fraction, int)) for v in p) else (0.0, 1.0)
    c0, c1, c2 = one, zero, zero
    for v in p:
        c0, c1, c2 = c0 * v, c1 * v + c0 * (1 - v), c2 * v + c1 * (1 - v)
    rest = one
    for v in p[2:]:
        rest *= v
    return c2 - (1 - p[0]) * (1 - p[1]) * rest


def pi_success_array(p: np.ndarray) -> np.ndarray:
    """Vectorized :func:`pi_success` over the last axis of ``p``."""
    p = np.asarray(p, dtype=float)
    c0 = np.ones(p.shape[:-1])
    c1 = np.zeros_like(c0)
    c2 = np.zeros_like(c0)
    for i in range(p.shape[-1]):
        v = p[..., i]
        c0, c1, c2 = c0 * v, c1 * v + c0 * (1 - v), c2 * v + c1 * (1 - v)
    return c2 - (1 - p[..., 0]) * (1 - p[..., 1]) * np.prod(p[..., 2:], axis=-1)


def pi_brute_force(p: Sequence[Prob], n: int | None = None) -> Prob:
    """Enumerate all ``2**k`` output patterns; the independent oracle for :func:`pi_success`."""
    p = _check_profile(p)
    k = len(p)
    if n is not None and not k <= n <= 20:
        raise InputError(f"need k <= n <= 20, got k={k}, n={n}")
    total: Prob = 0
    for pattern in product((0, 1), repeat=k):
        ones = [i for i, b in enumerate(pattern) if b]
        if len(ones) != 2 or ones == [0, 1]:
            continue
        w: Prob = 1
        for v, b in zip(p, pattern):
            w *= (1 - v) if b else v
        total += w
    return total


def optimal_local_strategy(n: int) -> tuple[Fraction, ...]:
    if n < 3:
        raise InputError("the edge-selection problem needs n >= 3")
    if n <= 4:
        return (Fraction(n - 2, n),) * n
    return (Fraction(0),) + (Fraction(n - 2, n - 1),) * (n - 1)


def pi_grid_search(k: int, step: Fraction = Fraction(1, 60)) -> tuple[float, tuple[Fraction, ...]]:
    """Maximize Π over sorted profiles with ``p_2 = ... = p_(k-1)`` on a grid.

    The free variables are ``p_1 <= p_mid <= p_k``; for ``k = 3`` this is the
    full sorted grid.  Returns the best value and the maximizing profile.
    """
    if k < 2:
        raise InputError("k must be at least 2")
    steps = int(1 / step)
    if Fraction(1, steps) != step:
        raise InputError("step must be 1/m for an integer m")
    grid = np.arange(steps + 1) / steps
    a, b, c = np.meshgrid(grid, grid, grid, indexing="ij")
    keep = (a <= b) & (b <= c)
    a, b, c = a[keep], b[keep], c[keep]
    if k == 2:
        cols = [a, c]
    else:
        cols = [a] + [b] * (k - 2) + [c]
    values = pi_success_array(np.stack(cols, axis=-1))
    best = int(np.argmax(values))
    idx = np.argwhere(keep)[best]
    i1, im, ik = (Fraction(int(i), steps) for i in idx)
    profile = (i1, ik) if k == 2 else (i1,) + (im,) * (k - 2) + (ik,)
    return float(values[best]), profile


def pi_full_grid_max(k: int, steps: int, chunk: int = 1 << 20) -> float:
    """Maximum of Π over every sorted profile on the grid ``{0, 1/steps, ..., 1}``."""
    grid = np.arange(steps + 1) / steps
    best = -1.0
    buf = []
    for combo in combinations(range(steps + k), k):
        # stars and bars: sorted multisets of grid indices
        buf.append([c - i for i, c in enumerate(combo)])
        if len(buf) >= chunk:
            best = max(best, float(pi_success_array(grid[np.array(buf)]).max()))
            buf = []
    if buf:
        best = max(best, float(pi_success_array(grid[np.array(buf)]).max()))
    return best


# the problem and its outcomes ---------------------------------------------


def edge_selection_inputs(n: int) -> tuple[LabeledGraph, ...]:
    """``K_n`` minus each edge in turn; labels are the ids ``1..n``."""
    if n < 3:
        raise InputError("the edge-selection problem needs n >= 3")
    return tuple(complete_graph_minus_edge(n, e, range(1, n + 1)) for e in combinations(range(n), 2))


def edge_selection_problem(n: int) -> Problem:
    def valid(g: LabeledGraph, y) -> bool:
        if any(b not in (0, 1) for b in y):
            return False
        ones = [v for v, b in enumerate(y) if b]
        return len(ones) == 2 and g.has_edge(*ones)

    return Problem(f"edge-select-n{n}", valid, edge_selection_inputs(n))


def _pair_vector(n: int, pair: tuple[int, int]) -> tuple[int, ...]:
    return tuple(1 if v in pair else 0 for v in range(n))


def edge_selection_localS(n: int) -> Outcome:
    """Outcome of the helper that marks a uniformly random edge of ``K_n``."""
    d = Distribution.uniform([_pair_vector(n, e) for e in combinations(range(n), 2)])
    return Outcome((g, d) for g in edge_selection_inputs(n))


class HelperEchoProgram(NodeProgram):
    """Outputs its helper value in round 0."""

    def output(self, node, state, inbox):
        return node.helper


def edge_selection_protocol(n: int) -> Protocol:
    helper = ClassicalHelper.uniform([_pair_vector(n, e) for e in combinations(range(n), 2)])
    return Protocol(f"edge-select-s-n{n}", HelperEchoProgram(), LOCAL_S, 0, helper, edge_selection_inputs(n))


class ProfileProgram(NodeProgram):
    """Zero-round strategy: the node with id ``i`` outputs 0 with probability ``p[i-1]``."""

    def __init__(self, profile: Sequence[Fraction]):
        self.profile = tuple(Fraction(v) for v in profile)
        self.tape_size = math.lcm(*(v.denominator for v in self.profile))

    def output(self, node, state, inbox):
        p0 = self.profile[node.label - 1]
        return 0 if node.tape < p0 * self.tape_size else 1


def profile_protocol(profile: Sequence[Fraction]) -> Protocol:
    """Plain LOCAL[0] realization of a strategy profile (profile index = node id - 1)."""
    n = len(profile)
    return Protocol("edge-select-local0", ProfileProgram(profile), LOCAL, 0, None, edge_selection_inputs(n))


E_INV = math.exp(-1)
KNOWN_MAXIMA = {3: Fraction(8, 27), 4: Fraction(5, 16), 5: Fraction(3, 4) ** 4}
KNOWN_ARGMAX = {
    3: (Fraction(1, 3),) * 3,
    4: (Fraction(1, 2),) * 4,
    5: (Fraction(0),) + (Fraction(3, 4),) * 4,
}
