"""Membership test for the physical-locality class phi-LOCAL[t].

An outcome passes at radius ``t`` when, for every non-empty node subset
``S`` and every pair of inputs whose distance-``t`` views of ``S`` coincide,
the two output distributions have the same marginal on ``S``.

Subsets are visited by size, then lexicographically; within a subset the
offending input pair reported is the first one in family order.  The first
failure found under this order is the witness.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations

from .errors import InputError
from .graph import LabeledGraph, view
from .outcomes import FLOAT_TOL, Distribution, Outcome, distributions_match, marginal


@dataclass(frozen=True)
class Witness:
    subset: tuple[int, ...]
    input_a: LabeledGraph
    input_b: LabeledGraph
    marginal_a: Distribution
    marginal_b: Distribution
    index_a: int
    index_b: int


@dataclass(frozen=True)
class Verdict:
    passed: bool
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.passed


def subsets(n: int):
    """Non-empty subsets of ``range(n)`` by size, then lexicographically."""
    for size in range(1, n + 1):
        yield from combinations(range(n), size)


def view_classes(inputs: Sequence[LabeledGraph], s: Sequence[int], t: int) -> list[list[int]]:
    """Partition input indices by their view of ``s`` at radius ``t``.

    Classes and their members keep family order.
    """
    if inputs and len({g.n for g in inputs}) != 1:
        raise InputError("inputs do not share one node set")
    classes: dict = {}
    for i, g in enumerate(inputs):
        classes.setdefault(view(g, s, t), []).append(i)
    return list(classes.values())


def check_philocal(o: Outcome, t: int, tol: float = FLOAT_TOL) -> Verdict:
    if t < 0:
        raise InputError(f"radius must be non-negative, got {t}")
    inputs = o.inputs
    dists = [o[g] for g in inputs]
    for s in subsets(o.n):
        best: tuple[int, int] | None = None
        margs: dict[int, Distribution] = {}
        for cls in view_classes(inputs, s, t):
            if len(cls) < 2:
                continue
            for i in cls:
                margs.setdefault(i, marginal(dists[i], s))
            for pos, i in enumerate(cls):
                if best is not None and i >= best[0]:
                    break
                j = next((j for j in cls[pos + 1 :] if not distributions_match(margs[i], margs[j], tol)), None)
                if j is not None:
                    best = (i, j) if best is None else min(best, (i, j))
                    break
        if best is not None:
            i, j = best
            return Verdict(False, Witness(s, inputs[i], inputs[j], margs[i], margs[j], i, j))
    return Verdict(True)


def minimal_radius(o: Outcome, t_max: int, tol: float = FLOAT_TOL) -> int | None:
    """Smallest ``t <= t_max`` at which ``o`` passes, or None."""
    for t in range(t_max + 1):
        if check_philocal(o, t, tol):
            return t
    return None
