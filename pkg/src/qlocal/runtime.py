"""Synchronous round-based execution under the six LOCAL-family models.

A run proceeds as follows:

* the helper (if any) is drawn, independently of the input graph;
* every node draws its random tape;
* round 0: ``program.init`` runs at every node, with no communication and no
  knowledge of the node's degree;
* rounds ``1 .. t``: ``program.round`` runs at every node, then classical
  messages (and, under a quantum channel, qubits) cross one edge each.  A
  node learns its degree once the round-1 exchange is over;
* ``program.output`` turns each node's final state into its integer output.

Every random event (helper draw, tape draw, measurement outcome) goes
through a chooser.  Sampling draws from a seeded RNG; exact evaluation
replays the run over every prefix of choices and weights each leaf by the
product of its choice probabilities.
"""

from __future__ import annotations

import copy
import pickle
import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Any, Callable, Hashable, NamedTuple

import numpy as np

from . import quantum as qm
from .errors import CapacityError, InputError, ProtocolError
from .graph import LabeledGraph
from .outcomes import Distribution, Outcome, OutputVector, Prob, merge_duplicates

PLAIN, SEPARABLE, ENTANGLED = "plain", "separable", "entangled"
CLASSICAL, QUANTUM = "classical", "quantum"

MAX_BRANCHES = 1_000_000


@dataclass(frozen=True)
class ModelConfig:
    init_mode: str = PLAIN
    channel_mode: str = CLASSICAL

    def __post_init__(self) -> None:
        if self.init_mode not in (PLAIN, SEPARABLE, ENTANGLED):
            raise InputError(f"unknown init mode {self.init_mode!r}")
        if self.channel_mode not in (CLASSICAL, QUANTUM):
            raise InputError(f"unknown channel mode {self.channel_mode!r}")

    @property
    def name(self) -> str:
        parts = ["LOCAL"]
        if self.channel_mode == QUANTUM:
            parts.append("Q")
        if self.init_mode != PLAIN:
            parts.append("S" if self.init_mode == SEPARABLE else "E")
        return "+".join(parts)

    @classmethod
    def parse(cls, name: str) -> ModelConfig:
        """Parse names such as ``LOCAL``, ``LOCAL+S`` or ``LOCAL+Q+E``."""
        parts = [p.strip().upper() for p in name.split("+")]
        if parts[0] != "LOCAL" or len(set(parts)) != len(parts):
            raise InputError(f"unrecognized model {name!r}")
        flags = set(parts[1:])
        if not flags <= {"S", "E", "Q"} or {"S", "E"} <= flags:
            raise InputError(f"unrecognized model {name!r}")
        init = ENTANGLED if "E" in flags else SEPARABLE if "S" in flags else PLAIN
        return cls(init, QUANTUM if "Q" in flags else CLASSICAL)

    def includes(self, other: ModelConfig) -> bool:
        """True when every program valid under ``other`` is valid here."""
        rank = {PLAIN: 0, SEPARABLE: 1, ENTANGLED: 2}
        return rank[self.init_mode] >= rank[other.init_mode] and (
            self.channel_mode == QUANTUM or other.channel_mode == CLASSICAL
        )

    def __str__(self) -> str:
        return self.name


LOCAL = ModelConfig()
LOCAL_S = ModelConfig(SEPARABLE)
LOCAL_E = ModelConfig(ENTANGLED)
LOCAL_Q = ModelConfig(PLAIN, QUANTUM)
LOCAL_QS = ModelConfig(SEPARABLE, QUANTUM)
LOCAL_QE = ModelConfig(ENTANGLED, QUANTUM)
ALL_MODELS = (LOCAL, LOCAL_S, LOCAL_E, LOCAL_Q, LOCAL_QS, LOCAL_QE)


# helpers ------------------------------------------------------------------


class SeparableHint(NamedTuple):
    """Helper contents of the separable extension: id in 1..n, n, shared random value."""

    id: int
    n: int
    shared: int


@dataclass(frozen=True)
class ClassicalHelper:
    """Finite distribution over helper assignments ``h: V -> values``.

    Built from the node count alone, before any input graph exists.
    """

    n: int
    support: tuple[tuple[tuple[Hashable, ...], Fraction], ...]

    def __post_init__(self) -> None:
        if not self.support:
            raise InputError("helper needs at least one assignment")
        for values, p in self.support:
            if len(values) != self.n:
                raise InputError(f"helper assignment {values} does not cover {self.n} nodes")
            if not p > 0:
                raise InputError("helper probabilities must be positive")
        if sum(p for _, p in self.support) != 1:
            raise InputError("helper probabilities must sum to 1")

    @classmethod
    def point(cls, values: Sequence[Hashable]) -> ClassicalHelper:
        return cls(len(values), ((tuple(values), Fraction(1)),))

    @classmethod
    def uniform(cls, assignments: Sequence[Sequence[Hashable]]) -> ClassicalHelper:
        assignments = [tuple(a) for a in assignments]
        p = Fraction(1, len(assignments))
        return cls(len(assignments[0]), tuple((a, p) for a in assignments))


@dataclass(frozen=True)
class EntangledHelper:
    """A pre-distributed quantum state, optionally with classical helper values."""

    state: qm.StateVector
    n: int
    classical: ClassicalHelper | None = None


HelperAssignment = ClassicalHelper | EntangledHelper


def make_separable_helper(n: int, shared_random_range: int = 1, seed: int | None = None) -> ClassicalHelper:
    """Unique ids ``1..n``, the value of ``n`` and a shared uniform value.

    Without ``seed`` the helper is the full distribution over the shared value;
    with ``seed`` it is the single assignment drawn from it.
    """
    if n < 1 or shared_random_range < 1:
        raise InputError("need n >= 1 and a positive shared range")
    assignments = [tuple(SeparableHint(v + 1, n, r) for v in range(n)) for r in range(shared_random_range)]
    if seed is not None:
        return ClassicalHelper.point(random.Random(seed).choice(assignments))
    return ClassicalHelper.uniform(assignments)


def make_entangled_helper(
    state: qm.StateVector, n: int, classical: ClassicalHelper | None = None
) -> EntangledHelper:
    if set(state.owners) != set(range(n)):
        raise InputError(f"state ownership {sorted(set(state.owners))} does not cover exactly nodes 0..{n - 1}")
    if classical is not None and classical.n != n:
        raise InputError("classical helper part has the wrong node count")
    return EntangledHelper(state, n, classical)


# programs -----------------------------------------------------------------


@dataclass(frozen=True)
class Broadcast:
    """Outbox value sending the same message through every port."""

    message: Any


class NodeProgram:
    """The code every node runs.

    Subclasses override the three hooks.  Hooks receive a :class:`Node`
    handle exposing the node's label, helper value, random tape, degree (once
    known), owned qubits and quantum operations; the handle never reveals a
    node identity.  All node memory lives in the state the hooks return.  ``tape_size`` is the size of the per-node random tape
    alphabet (``None`` = unbounded, which rules out exact evaluation).
    """

    tape_size: int | None = 1

    def init(self, node: Node) -> Any:
        return None

    def round(self, node: Node, state: Any, r: int, inbox: dict[int, Any]) -> tuple[Any, Any]:
        """Return ``(new_state, outbox)``; outbox is ``{port: message}`` or :class:`Broadcast`."""
        return state, {}

    def output(self, node: Node, state: Any, inbox: dict[int, Any]) -> int:
        raise NotImplementedError


# execution ----------------------------------------------------------------


class _Register:
    """Global quantum state shared by a run; positions follow ``qids``."""

    def __init__(self, state: qm.StateVector):
        self.state = state
        self.qids = list(range(state.qubit_count))
        self.next_id = state.qubit_count
        self.in_transit: set[int] = set()

    def copy(self) -> _Register:
        twin = copy.copy(self)
        twin.qids = list(self.qids)
        twin.in_transit = set(self.in_transit)
        return twin

    def pos(self, qid: int) -> int:
        return self.qids.index(qid)

    def owner(self, qid: int) -> int | None:
        if qid in self.in_transit or qid not in self.qids:
            return None
        return self.state.owners[self.pos(qid)]

    def owned_by(self, v: int) -> tuple[int, ...]:
        return tuple(q for q, o in zip(self.qids, self.state.owners) if o == v and q not in self.in_transit)

    def alloc(self, v: int, count: int) -> list[int]:
        if self.state.qubit_count + count > qm.MAX_QUBITS:
            raise CapacityError(f"allocating {count} qubit(s) exceeds the cap of {qm.MAX_QUBITS}")
        new = list(range(self.next_id, self.next_id + count))
        self.next_id += count
        self.state = self.state.tensor(qm.zero_state(count, [v] * count))
        self.qids.extend(new)
        return new

    def transfer(self, qid: int, v: int) -> None:
        owners = list(self.state.owners)
        owners[self.pos(qid)] = v
        self.state = self.state.with_owners(owners)
        self.in_transit.discard(qid)


class Node:
    """Per-node handle passed to program hooks."""

    def __init__(self, v: int, label: int, helper: Any, tape: int, run: _Run):
        self._v = v
        self._run = run
        self.label = label
        self.helper = helper
        self.tape = tape
        self.degree: int | None = None
        self.round = 0
        self.arrivals: dict[int, tuple[int, ...]] = {}
        self._sends: list[tuple[int, int]] = []

    def copy_into(self, run: _Run) -> Node:
        twin = copy.copy(self)
        twin._run = run
        twin.arrivals = dict(self.arrivals)
        twin._sends = list(self._sends)
        return twin

    @property
    def qubits(self) -> tuple[int, ...]:
        return self._run.reg.owned_by(self._v)

    def _own(self, qids: Sequence[int]) -> list[int]:
        reg = self._run.reg
        for q in qids:
            if reg.owner(q) != self._v:
                raise ProtocolError(f"qubit {q} is not owned by this node")
        return [reg.pos(q) for q in qids]

    def alloc(self, count: int = 1) -> list[int]:
        """Fresh qubits in ``|0>``, owned by this node."""
        return self._run.reg.alloc(self._v, count)

    def apply(self, gate: qm.Gate, *qubits: int) -> None:
        reg = self._run.reg
        reg.state = qm.apply_gate(reg.state, gate, self._own(qubits))

    def measure(self, qubit: int) -> int:
        """Measure and discard ``qubit``; keep the returned bit in program state if needed."""
        (pos,) = self._own((qubit,))
        return self._run.measure(pos)

    def send_qubit(self, port: int, qubit: int) -> None:
        if self._run.cfg.channel_mode != QUANTUM:
            raise ProtocolError("qubits can only be sent over quantum channels")
        if self.degree is not None and not 1 <= port <= self.degree:
            raise ProtocolError(f"no port {port}")
        self._own((qubit,))
        self._run.reg.in_transit.add(qubit)
        self._sends.append((port, qubit))


class _Sampler:
    def __init__(self, rng: random.Random):
        self.rng = rng

    def choose(self, options: list[tuple[Any, Prob]]) -> Any:
        if len(options) == 1:
            return options[0][0]
        r = self.rng.random()
        acc = 0.0
        for value, p in options:
            acc += float(p)
            if r < acc:
                return value
        return options[-1][0]

    def choose_bit(self, p0: float, p1: float) -> int:
        if p0 <= qm.NORM_TOL or p1 <= qm.NORM_TOL:
            return int(p0 <= qm.NORM_TOL)
        return 0 if self.rng.random() < p0 else 1


class _Replay:
    """Follows a fixed prefix of choice indices, then takes index 0 and records the rest."""

    def __init__(self, prefix: tuple[int, ...]):
        self.prefix = prefix
        self.path: list[int] = []
        self.weight: Prob = Fraction(1)
        self.pending: list[tuple[int, ...]] = []

    def choose(self, options: list[tuple[Any, Prob]]) -> Any:
        depth = len(self.path)
        if depth < len(self.prefix):
            k = self.prefix[depth]
        else:
            k = 0
            self.pending.extend(tuple(self.path) + (j,) for j in range(1, len(options)))
        self.path.append(k)
        self.weight = self.weight * options[k][1]
        return options[k][0]

    def choose_bit(self, p0: float, p1: float) -> int:
        return self.choose(_branch_probs(p0, p1))


def _branch_probs(p0: float, p1: float) -> list[tuple[int, Prob]]:
    if p0 <= qm.NORM_TOL:
        return [(1, Fraction(1))]
    if p1 <= qm.NORM_TOL:
        return [(0, Fraction(1))]
    f0, f1 = qm.snap(p0), qm.snap(p1)
    if f0 is not None and f1 is not None and f0 + f1 == 1:
        return [(0, f0), (1, f1)]
    return [(0, p0), (1, p1)]


def _copy_value(x: Any) -> Any:
    # pickling round-trips plain data much faster than deepcopy
    try:
        return pickle.loads(pickle.dumps(x, pickle.HIGHEST_PROTOCOL))
    except (pickle.PicklingError, TypeError, AttributeError):
        return copy.deepcopy(x)


class _Run:
    """One execution, split into phases: setup, rounds ``1..t``, output.

    Exact evaluation snapshots the run between phases, so the full mutable
    configuration lives on this object and :meth:`signature` can compare two
    configurations for merging.
    """

    def __init__(self, g: LabeledGraph, prog: NodeProgram, cfg: ModelConfig, t: int, helper, chooser):
        self.g, self.prog, self.cfg, self.t, self.chooser = g, prog, cfg, t, chooser
        self.helper = helper
        state = qm.StateVector([1.0], ())
        if isinstance(helper, EntangledHelper):
            state = helper.state
        self.reg = _Register(state)
        self.nodes: list[Node] = []
        self.states: list[Any] = []
        self.inboxes: list[dict[int, Any]] = []
        self.outboxes: list[Any] = [None] * g.n
        self.outputs: list[int] = []

    def measure(self, pos: int) -> int:
        reg = self.reg
        bit = self.chooser.choose_bit(*qm.qubit_probabilities(reg.state, pos))
        reg.state = qm.project_out(reg.state, pos, bit)
        del reg.qids[pos]
        return bit

    def setup(self) -> None:
        """Helper draw, tapes and round 0."""
        g, prog, n = self.g, self.prog, self.g.n
        classical = self.helper.classical if isinstance(self.helper, EntangledHelper) else self.helper
        values: tuple = (None,) * n
        if classical is not None:
            values = self.chooser.choose(list(classical.support))
        size = prog.tape_size
        for v in range(n):
            if size is None:
                tape = self.chooser.rng.getrandbits(63)
            elif size == 1:
                tape = 0
            else:
                tape = self.chooser.choose([(k, Fraction(1, size)) for k in range(size)])
            self.nodes.append(Node(v, g.labels[v], values[v], tape, self))
        self.states = [prog.init(node) for node in self.nodes]
        self.inboxes = [{} for _ in range(n)]

    def hook(self, r: int, v: int) -> None:
        """Round ``r`` compute phase of node ``v``; the outbox waits for :meth:`deliver`."""
        node = self.nodes[v]
        node.round = r
        self.states[v], self.outboxes[v] = self.prog.round(node, self.states[v], r, self.inboxes[v])

    def deliver(self, r: int) -> None:
        self.inboxes = self._exchange(self.nodes, self.outboxes)
        self.outboxes = [None] * self.g.n
        if r == 1:
            for v, node in enumerate(self.nodes):
                node.degree = self.g.degree(v)

    def emit(self, v: int) -> None:
        node = self.nodes[v]
        node.round = self.t + 1
        self.outputs.append(int(self.prog.output(node, self.states[v], self.inboxes[v])))

    def phases(self) -> list[Callable[[_Run], Any]]:
        """The run as a sequence of phases: setup, one per round, output."""
        n = self.g.n

        def round_phase(run: _Run, r: int) -> None:
            for v in range(n):
                run.hook(r, v)
            run.deliver(r)

        def output_phase(run: _Run) -> None:
            for v in range(n):
                run.emit(v)

        return [_Run.setup, *(partial(round_phase, r=r) for r in range(1, self.t + 1)), output_phase]

    def execute(self) -> OutputVector:
        for phase in self.phases():
            phase(self)
        return tuple(self.outputs)

    def clone(self, chooser) -> _Run:
        twin = copy.copy(self)
        twin.chooser = chooser
        twin.reg = self.reg.copy()
        twin.states, twin.inboxes, twin.outboxes = _copy_value((self.states, self.inboxes, self.outboxes))
        twin.outputs = list(self.outputs)
        twin.nodes = [nd.copy_into(twin) for nd in self.nodes]
        return twin

    def signature(self) -> Hashable:
        """Everything that can influence the rest of the run.

        Amplitudes are rounded to 1e-10 so that branches which reconverge
        up to float noise merge; a miss only costs time.
        """
        reg = self.reg
        amps = np.round(reg.state.amplitudes, 10) + 0j
        nodes = tuple(
            (nd.tape, repr(nd.helper), nd.degree, tuple(sorted(nd.arrivals.items())), tuple(nd._sends))
            for nd in self.nodes
        )
        return (
            repr(self.states),
            repr(self.inboxes),
            repr(self.outboxes),
            tuple(self.outputs),
            nodes,
            tuple(reg.qids),
            reg.state.owners,
            tuple(sorted(reg.in_transit)),
            reg.next_id,
            amps.tobytes(),
        )

    def _exchange(self, nodes: list[Node], outboxes: list[Any]) -> list[dict[int, Any]]:
        g = self.g
        inboxes: list[dict[int, Any]] = [{} for _ in range(g.n)]
        for node in nodes:
            node.arrivals = {}
        for v, out in enumerate(outboxes):
            deg = g.degree(v)
            if out is None:
                continue
            if isinstance(out, Broadcast):
                out = {p: out.message for p in range(1, deg + 1)}
            if not isinstance(out, dict):
                raise ProtocolError(f"outbox must be a dict or Broadcast, got {type(out).__name__}")
            for port, msg in out.items():
                if not (isinstance(port, int) and 1 <= port <= deg):
                    raise ProtocolError(f"message sent on nonexistent port {port!r}")
                w, q = g.ports[v][port - 1]
                inboxes[w][q] = msg
        for v, node in enumerate(nodes):
            for port, qid in node._sends:
                if not 1 <= port <= g.degree(v):
                    raise ProtocolError(f"qubit sent on nonexistent port {port}")
                w, q = g.ports[v][port - 1]
                self.reg.transfer(qid, w)
                arrivals = nodes[w].arrivals
                arrivals[q] = arrivals.get(q, ()) + (qid,)
            node._sends = []
        return inboxes


def _check_setup(g: LabeledGraph, cfg: ModelConfig, t: int, helper) -> None:
    if t < 0:
        raise InputError(f"round count must be non-negative, got {t}")
    if helper is None:
        return
    if helper.n != g.n:
        raise InputError(f"helper built for {helper.n} nodes, graph has {g.n}")
    if cfg.init_mode == PLAIN:
        raise InputError("plain initialization admits no helper")
    if isinstance(helper, EntangledHelper) and cfg.init_mode != ENTANGLED:
        raise InputError("an entangled helper needs entangled initialization")


def run_once(
    g: LabeledGraph,
    prog: NodeProgram,
    cfg: ModelConfig,
    t: int,
    seed: int,
    helper: HelperAssignment | None = None,
) -> OutputVector:
    """One execution; fully determined by ``seed``."""
    _check_setup(g, cfg, t, helper)
    return _Run(g, prog, cfg, t, helper, _Sampler(random.Random(seed))).execute()


def _expand(run: _Run, phase: Callable[[_Run], Any], budget: list[int]):
    """Every choice branch of one phase, replayed on clones of ``run``."""
    stack: list[tuple[int, ...]] = [()]
    while stack:
        budget[0] -= 1
        if budget[0] < 0:
            raise CapacityError("too many execution branches")
        chooser = _Replay(stack.pop())
        twin = run.clone(chooser)
        result = phase(twin)
        yield twin, chooser.weight, result
        stack.extend(reversed(chooser.pending))


def run_exact(
    g: LabeledGraph,
    prog: NodeProgram,
    cfg: ModelConfig,
    t: int,
    helper: HelperAssignment | None = None,
    max_branches: int = MAX_BRANCHES,
) -> Distribution:
    """Exact output distribution over helper draws, tapes and measurement branches.

    The run advances one phase at a time over a frontier of weighted
    configurations; configurations that coincide after a phase are merged,
    which keeps branching from compounding when, e.g., teleportation
    corrections make measurement branches reconverge.
    """
    _check_setup(g, cfg, t, helper)
    if prog.tape_size is None or prog.tape_size < 1:
        raise CapacityError("exact evaluation needs a finite random tape alphabet")
    budget = [max_branches]
    start = _Run(g, prog, cfg, t, helper, None)
    frontier: list[tuple[_Run, Prob]] = [(start, Fraction(1))]
    for phase in start.phases():
        merged: dict[Hashable, tuple[_Run, Prob]] = {}
        for run, w in frontier:
            for twin, lw, _ in _expand(run, phase, budget):
                key = twin.signature()
                merged[key] = (twin, merged[key][1] + w * lw) if key in merged else (twin, w * lw)
        frontier = list(merged.values())
    entries = [(tuple(run.outputs), w) for run, w in frontier]
    return merge_duplicates(entries, range(g.n))


def _derive_seed(seed: int, i: int) -> int:
    return (seed << 32) | i


def sample_outcome(
    g: LabeledGraph,
    prog: NodeProgram,
    cfg: ModelConfig,
    t: int,
    shots: int,
    seed: int,
    helper: HelperAssignment | None = None,
) -> Distribution:
    """Empirical distribution of ``shots`` independent runs with derived seeds."""
    if shots < 1:
        raise InputError("shots must be positive")
    _check_setup(g, cfg, t, helper)
    counts: dict[OutputVector, int] = {}
    for i in range(shots):
        y = _Run(g, prog, cfg, t, helper, _Sampler(random.Random(_derive_seed(seed, i)))).execute()
        counts[y] = counts.get(y, 0) + 1
    return Distribution({y: Fraction(c, shots) for y, c in counts.items()}, range(g.n))


def exact_outcome(
    inputs: Sequence[LabeledGraph],
    prog: NodeProgram,
    cfg: ModelConfig,
    t: int,
    helper: HelperAssignment | None = None,
) -> Outcome:
    """:func:`run_exact` over a whole input family."""
    return Outcome((g, run_exact(g, prog, cfg, t, helper)) for g in inputs)


@dataclass(frozen=True)
class Protocol:
    """A program bundled with the model, helper and round budget it is meant for."""

    name: str
    program: NodeProgram
    model: ModelConfig
    rounds: int
    helper: HelperAssignment | None = None
    inputs: tuple[LabeledGraph, ...] = field(default=(), compare=False)

    def exact(self, g: LabeledGraph, model: ModelConfig | None = None) -> Distribution:
        return run_exact(g, self.program, model or self.model, self.rounds, self.helper)

    def outcome(self, model: ModelConfig | None = None) -> Outcome:
        return exact_outcome(self.inputs, self.program, model or self.model, self.rounds, self.helper)

    def sample(self, g: LabeledGraph, shots: int, seed: int, model: ModelConfig | None = None) -> Distribution:
        return sample_outcome(g, self.program, model or self.model, self.rounds, shots, seed, self.helper)

    def once(self, g: LabeledGraph, seed: int, model: ModelConfig | None = None) -> OutputVector:
        return run_once(g, self.program, model or self.model, self.rounds, seed, self.helper)
