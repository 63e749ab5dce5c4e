"""Output distributions, outcomes and problems.

Probabilities are :class:`fractions.Fraction` whenever the generating process
is exactly representable, and plain floats otherwise.  A distribution never
mixes the two: one float entry turns the whole distribution into a float
distribution, which carries the comparison tolerance ``FLOAT_TOL``.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Union

from .errors import ConsistencyError, InputError
from .graph import LabeledGraph, format_graph, parse_graph

Prob = Union[Fraction, float]
OutputVector = tuple[int, ...]

FLOAT_TOL = 1e-9
ABSENT_BELOW = 1e-12


def _as_prob(p) -> Prob:
    if isinstance(p, Fraction):
        return p
    if isinstance(p, int):
        return Fraction(p)
    return float(p)


class Distribution:
    """Normalized distribution over output vectors indexed by ``nodes``.

    ``entries`` maps each output vector (a tuple aligned with ``nodes``) to a
    strictly positive probability.  Instances are immutable.
    """

    __slots__ = ("_nodes", "_entries", "_exact")

    def __init__(self, entries: Mapping[Sequence[int], Prob], nodes: Sequence[int] | None = None):
        items = [(tuple(int(x) for x in y), _as_prob(p)) for y, p in entries.items()]
        if not items:
            raise ConsistencyError("a distribution needs at least one entry")
        width = len(items[0][0])
        nodes = tuple(range(width)) if nodes is None else tuple(nodes)
        if len(set(nodes)) != len(nodes):
            raise InputError(f"repeated node in {nodes}")
        exact = all(isinstance(p, Fraction) for _, p in items)
        table: dict[OutputVector, Prob] = {}
        for y, p in items:
            if len(y) != len(nodes):
                raise InputError(f"output {y} does not match nodes {nodes}")
            if y in table:
                raise InputError(f"output {y} listed twice")
            if not p > 0:
                raise ConsistencyError(f"probability of {y} must be positive, got {p}")
            table[y] = p if exact else float(p)
        total = sum(table.values())
        if exact and total != 1:
            raise ConsistencyError(f"probabilities sum to {total}, not 1")
        if not exact and abs(total - 1.0) > FLOAT_TOL:
            raise ConsistencyError(f"probabilities sum to {total!r}, not 1 within {FLOAT_TOL}")
        self._nodes = nodes
        self._entries = dict(sorted(table.items()))
        self._exact = exact

    @classmethod
    def point(cls, y: Sequence[int], nodes: Sequence[int] | None = None) -> Distribution:
        return cls({tuple(y): Fraction(1)}, nodes)

    @classmethod
    def uniform(cls, ys: Iterable[Sequence[int]], nodes: Sequence[int] | None = None) -> Distribution:
        ys = [tuple(y) for y in ys]
        return merge_duplicates([(y, Fraction(1, len(ys))) for y in ys], nodes)

    @property
    def nodes(self) -> tuple[int, ...]:
        return self._nodes

    @property
    def exact(self) -> bool:
        return self._exact

    @property
    def support(self) -> tuple[OutputVector, ...]:
        return tuple(self._entries)

    def items(self):
        return self._entries.items()

    def prob(self, y: Sequence[int]) -> Prob:
        return self._entries.get(tuple(y), Fraction(0) if self._exact else 0.0)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[OutputVector]:
        return iter(self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        return self._nodes == other._nodes and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self._nodes, tuple(self._entries.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{y}: {p}" for y, p in self._entries.items())
        return f"Distribution({{{body}}}, nodes={self._nodes})"

    def as_float(self) -> Distribution:
        return Distribution({y: float(p) for y, p in self._entries.items()}, self._nodes)


def merge_duplicates(entries: Iterable[tuple[Sequence[int], Prob]], nodes: Sequence[int] | None = None) -> Distribution:
    """Sum repeated output vectors, drop zero mass and validate normalization."""
    acc: dict[OutputVector, Prob] = {}
    for y, p in entries:
        p = _as_prob(p)
        if p < 0:
            raise ConsistencyError(f"negative probability {p} for {tuple(y)}")
        key = tuple(int(x) for x in y)
        acc[key] = acc.get(key, 0) + p
    exact = all(isinstance(p, (Fraction, int)) for p in acc.values())
    floor = 0 if exact else ABSENT_BELOW
    kept = {y: p for y, p in acc.items() if p > floor}
    if not kept:
        raise ConsistencyError("no probability mass")
    return Distribution(kept, nodes)


def marginal(d: Distribution, s: Iterable[int]) -> Distribution:
    """Marginal of ``d`` on the node subset ``s`` (ordered by node id)."""
    s = tuple(sorted(set(s)))
    index = {v: i for i, v in enumerate(d.nodes)}
    missing = [v for v in s if v not in index]
    if missing:
        raise InputError(f"nodes {missing} are not in {d.nodes}")
    pos = [index[v] for v in s]
    return merge_duplicates(((tuple(y[i] for i in pos), p) for y, p in d.items()), s)


def distributions_match(a: Distribution, b: Distribution, tol: float = FLOAT_TOL) -> bool:
    """Exact equality for rational pairs, entry-wise ``tol`` otherwise."""
    if a.nodes != b.nodes:
        return False
    if a.exact and b.exact:
        return a == b
    keys = {y for y in a if a.prob(y) >= ABSENT_BELOW} | {y for y in b if b.prob(y) >= ABSENT_BELOW}
    return all(abs(float(a.prob(y)) - float(b.prob(y))) <= tol for y in keys)


def total_variation(a: Distribution, b: Distribution) -> float:
    if a.nodes != b.nodes:
        raise InputError("distributions are over different node tuples")
    keys = set(a) | set(b)
    return 0.5 * sum(abs(float(a.prob(y)) - float(b.prob(y))) for y in keys)


# outcomes and problems ----------------------------------------------------


class Outcome:
    """Finite, ordered mapping from input graphs to output distributions."""

    def __init__(self, pairs: Iterable[tuple[LabeledGraph, Distribution]]):
        pairs = tuple(pairs)
        if not pairs:
            raise InputError("an outcome needs at least one input")
        n = pairs[0][0].n
        table: dict[LabeledGraph, Distribution] = {}
        for g, d in pairs:
            if g.n != n:
                raise InputError(f"inputs have different node sets ({g.n} vs {n} nodes)")
            if d.nodes != tuple(range(n)):
                raise InputError(f"distribution over {d.nodes} does not cover nodes 0..{n - 1}")
            if g in table:
                raise InputError("input graph listed twice")
            table[g] = d
        self._table = table
        self.n = n

    @property
    def inputs(self) -> tuple[LabeledGraph, ...]:
        return tuple(self._table)

    def __getitem__(self, g: LabeledGraph) -> Distribution:
        try:
            return self._table[g]
        except KeyError:
            raise InputError("graph is not in this outcome's input family") from None

    def __contains__(self, g: object) -> bool:
        return g in self._table

    def __len__(self) -> int:
        return len(self._table)

    def items(self):
        return self._table.items()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Outcome):
            return NotImplemented
        return list(self._table.items()) == list(other._table.items())

    def __repr__(self) -> str:
        return f"Outcome(<{len(self)} inputs on {self.n} nodes>)"


@dataclass(frozen=True)
class Problem:
    """Validity predicate ``valid(graph, y)`` plus an optional input family."""

    name: str
    valid: Callable[[LabeledGraph, OutputVector], bool]
    inputs: tuple[LabeledGraph, ...] = field(default=(), compare=False)

    def __call__(self, graph: LabeledGraph, y: Sequence[int]) -> bool:
        return bool(self.valid(graph, tuple(y)))


def solution_probability(o: Outcome, p: Problem, g: LabeledGraph) -> Prob:
    d = o[g]
    zero: Prob = Fraction(0) if d.exact else 0.0
    return sum((q for y, q in d.items() if p(g, y)), zero)


def min_solution_probability(o: Outcome, p: Problem) -> Prob:
    """Worst case over the outcome's inputs: the ``p`` of "solution with probability p"."""
    return min(solution_probability(o, p, g) for g in o.inputs)


# text formats -------------------------------------------------------------


def _fmt_prob(p: Prob) -> str:
    if isinstance(p, Fraction):
        return f"{p.numerator}/{p.denominator}"
    return repr(float(p))


def _parse_prob(tok: str) -> Prob:
    if "/" in tok or tok.lstrip("+-").isdigit():
        return Fraction(tok)
    return float(tok)


def format_distribution(d: Distribution) -> str:
    return "".join(f"p {_fmt_prob(p)} y {' '.join(map(str, y))}\n" for y, p in d.items())


def parse_distribution(text: str) -> Distribution:
    """Parse ``p <num>/<den> y <v1> ... <vn>`` lines into a distribution."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        entries.append(_parse_entry(line, lineno))
    if not entries:
        raise InputError("no distribution entries")
    return merge_duplicates(entries)


def _parse_entry(line: str, lineno: int) -> tuple[OutputVector, Prob]:
    parts = line.split()
    try:
        if len(parts) < 4 or parts[0] != "p" or parts[2] != "y":
            raise ValueError("expected 'p <prob> y <values...>'")
        return tuple(int(x) for x in parts[3:]), _parse_prob(parts[1])
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"line {lineno}: {exc}") from None


def read_outcome(path: str | Path) -> Outcome:
    """Read an outcome file: ``input <graph-file>`` headers, each followed by entries.

    Graph paths are resolved relative to the outcome file's directory.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    pairs: list[tuple[LabeledGraph, Distribution]] = []
    graph: LabeledGraph | None = None
    entries: list[tuple[OutputVector, Prob]] = []

    def flush() -> None:
        if graph is None:
            return
        if not entries:
            raise InputError(f"{path}: input without entries")
        try:
            pairs.append((graph, merge_duplicates(entries)))
        except ConsistencyError as exc:
            raise InputError(f"{path}: {exc}") from None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("input"):
            flush()
            parts = line.split(maxsplit=1)
            if len(parts) != 2:
                raise InputError(f"{path}:{lineno}: 'input' needs a graph file")
            gpath = path.parent / parts[1]
            try:
                graph = parse_graph(gpath.read_text())
            except OSError as exc:
                raise InputError(f"{path}:{lineno}: cannot read {gpath}: {exc}") from None
            entries = []
        elif graph is None:
            raise InputError(f"{path}:{lineno}: entry before any 'input' header")
        else:
            entries.append(_parse_entry(line, lineno))
    flush()
    if not pairs:
        raise InputError(f"{path}: no inputs")
    return Outcome(pairs)


def write_outcome(o: Outcome, path: str | Path) -> list[Path]:
    """Write ``o`` to ``path`` plus one graph file per input beside it."""
    path = Path(path)
    written = []
    chunks = []
    for i, (g, d) in enumerate(o.items()):
        gpath = path.with_name(f"{path.stem}.input{i}.graph")
        gpath.write_text(format_graph(g))
        written.append(gpath)
        chunks.append(f"input {gpath.name}\n" + format_distribution(d))
    path.write_text("".join(chunks))
    return [path, *written]
