"""Expected-versus-computed reports for the headline results.

Each item returns a list of :class:`Check` lines; the CLI prints them and
the acceptance tests assert on them.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .checker import check_philocal
from .graph import view
from .outcomes import Distribution, min_solution_probability
from .protocols import coloring, edge_selection, fairness, mod4, registry

# GHZ table: even-sum input -> even-parity outputs, odd -> odd, each 1/4
TABLE1 = {
    (0, 0, 0): Distribution({y: Fraction(1, 4) for y in [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]}),
    **{
        x: Distribution({y: Fraction(1, 4) for y in [(1, 1, 1), (1, 0, 0), (0, 1, 0), (0, 0, 1)]})
        for x in [(0, 1, 1), (1, 0, 1), (1, 1, 0)]
    },
}

PI_MAXIMA = edge_selection.KNOWN_MAXIMA
PI_ARGMAX = edge_selection.KNOWN_ARGMAX
GRID_TOL = 5e-3


@dataclass(frozen=True)
class Check:
    label: str
    expect: str
    got: str
    passed: bool

    def line(self) -> str:
        return f"{self.label}: EXPECT {self.expect} GOT {self.got} {'PASS' if self.passed else 'FAIL'}"


def _fmt(d: Distribution) -> str:
    return "{" + ", ".join(f"{''.join(map(str, y))}:{p}" for y, p in d.items()) + "}"


def table1() -> list[Check]:
    """Runtime route and bare-circuit route, each against the GHZ table."""
    protocol = mod4.ghz_protocol()
    checks = []
    for g in protocol.inputs:
        x = g.labels
        want = TABLE1[x]
        for route, got in (("run_exact", protocol.exact(g)), ("circuit", mod4.ghz_circuit_distribution(x))):
            checks.append(Check(f"table1 {route} x={x}", _fmt(want), _fmt(got), got == want))
    return checks


def mod4_certainty() -> list[Check]:
    protocol = mod4.ghz_protocol()
    p = min_solution_probability(protocol.outcome(), mod4.mod4_problem())
    imp = mod4.mod4_separable_impossibility()
    return [
        Check("ghz solution probability", "1", str(p), p == 1),
        Check("no deterministic triple among 64", "True", str(imp), imp is True),
    ]


def pi_maxima() -> list[Check]:
    checks = []
    for k, want in PI_MAXIMA.items():
        best, arg = edge_selection.pi_grid_search(k)
        ok = abs(best - float(want)) <= GRID_TOL and best <= float(want) + 1e-12
        checks.append(Check(f"pi grid max k={k}", f"{want} ~ {float(want):.6f}", f"{best:.6f} at {arg}", ok))
        exact = edge_selection.pi_success(PI_ARGMAX[k])
        checks.append(Check(f"pi at optimum k={k}", str(want), str(exact), exact == want))
    return checks


def edge_select() -> list[Check]:
    checks = []
    values = []
    for n in range(3, 13):
        o = edge_selection.edge_selection_localS(n)
        got = min_solution_probability(o, edge_selection.edge_selection_problem(n))
        want = 1 - Fraction(1, comb(n, 2))
        checks.append(Check(f"LOCAL+S edge selection n={n}", str(want), str(got), got == want))
        values.append(edge_selection.pi_success(edge_selection.optimal_local_strategy(n)))
    below = all(v < math.exp(-1) for v in values)
    rising = all(a < b for a, b in zip(values, values[1:]))
    checks.append(Check("optimal LOCAL[0] below 1/e, n=3..12", "True", str(below), below))
    checks.append(Check("optimal LOCAL[0] increasing in n", "True", str(rising), rising))
    return checks


def two_coloring() -> list[Check]:
    checks = []
    for n in (4, 6, 8, 10):
        o = coloring.two_coloring_outcome(n)
        t = coloring.critical_radius(n)
        ok_at = check_philocal(o, t).passed
        below = check_philocal(o, t - 1)
        checks.append(Check(f"two-coloring C_{n} at t={t}", "pass", "pass" if ok_at else "fail", ok_at))
        got = "pass" if below.passed else f"fail S={below.witness.subset}"
        checks.append(Check(f"two-coloring C_{n} at t={t - 1}", "fail", got, not below.passed))
    return checks


def witness_is_valid(verdict, t: int) -> bool:
    w = verdict.witness
    if w is None:
        return False
    same_view = view(w.input_a, w.subset, t) == view(w.input_b, w.subset, t)
    return same_view and w.marginal_a != w.marginal_b


def consensus() -> list[Check]:
    checks = []
    failures = 0
    for p, q, o in fairness.consensus_grid():
        v = check_philocal(o, 0)
        if not v.passed and witness_is_valid(v, 0):
            failures += 1
    checks.append(Check("consensus grid failures at t=0", "25/25", f"{failures}/25", failures == 25))
    for p, q, want in ((1, 0, (1,)), (0, 0, (0,))):
        v = check_philocal(fairness.consensus_outcome(p, q), 0)
        got = v.witness.subset if v.witness else None
        checks.append(Check(f"consensus witness p={p} q={q}", f"S={want}", f"S={got}", got == want))
    return checks


def containment() -> list[Check]:
    checks = []
    for bundle in registry.quantum_bundles():
        v = check_philocal(bundle.outcome(), bundle.rounds)
        checks.append(Check(f"{bundle.name} in phi-LOCAL[{bundle.rounds}]", "pass", "pass" if v else "fail", v.passed))
    return checks


ITEMS: dict[str, Callable[[], list[Check]]] = {
    "table1": table1,
    "mod4": mod4_certainty,
    "pi-maxima": pi_maxima,
    "edge-select": edge_select,
    "two-coloring": two_coloring,
    "consensus": consensus,
    "containment": containment,
}
