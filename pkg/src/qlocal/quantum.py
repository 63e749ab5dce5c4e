"""Pure-state simulation of small multi-qubit systems with node ownership.

Qubit 0 is the most significant bit of a basis index, so ``|q0 q1 ... q(m-1)>``
has index ``q0 * 2**(m-1) + ... + q(m-1)``.  Each qubit is owned by one node;
:func:`exact_distribution` groups measured bits by owner.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import CapacityError, InputError
from .outcomes import Distribution, merge_duplicates

MAX_QUBITS = 20
NORM_TOL = 1e-12
SNAP_TOL = 1e-9


class StateVector:
    """Immutable normalized amplitude vector plus a qubit -> node ownership map."""

    __slots__ = ("_amps", "_owners")

    def __init__(self, amplitudes, owners: Sequence[int] | None = None, *, _checked: bool = False):
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if _checked:
            # trusted internal path: shape and norm already hold
            amps.flags.writeable = False
            self._amps = amps
            self._owners = tuple(owners)
            return
        m = int(round(math.log2(amps.size))) if amps.size else -1
        if m < 0 or amps.size != 1 << m:
            raise InputError(f"amplitude count {amps.size} is not a power of two")
        if m > MAX_QUBITS:
            raise CapacityError(f"{m} qubits exceeds the cap of {MAX_QUBITS}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise InputError(f"state is not normalized (squared norm {norm!r})")
        owners = tuple(range(m)) if owners is None else tuple(int(o) for o in owners)
        if len(owners) != m:
            raise InputError(f"ownership covers {len(owners)} qubits, state has {m}")
        amps.flags.writeable = False
        self._amps = amps
        self._owners = owners

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amps

    @property
    def owners(self) -> tuple[int, ...]:
        return self._owners

    @property
    def qubit_count(self) -> int:
        return len(self._owners)

    def with_owners(self, owners: Sequence[int]) -> StateVector:
        return StateVector(self._amps, owners, _checked=True)

    def tensor(self, other: StateVector) -> StateVector:
        """``self ⊗ other``; the new qubits are appended after ours."""
        if self.qubit_count + other.qubit_count > MAX_QUBITS:
            raise CapacityError(f"more than {MAX_QUBITS} qubits")
        return StateVector(np.kron(self._amps, other._amps), self._owners + other._owners, _checked=True)

    def __copy__(self) -> StateVector:
        return self

    def __deepcopy__(self, memo) -> StateVector:
        return self

    def __repr__(self) -> str:
        return f"StateVector({self.qubit_count} qubits, owners={self._owners})"


def zero_state(m: int, owners: Sequence[int] | None = None) -> StateVector:
    amps = np.zeros(1 << m, dtype=complex)
    amps[0] = 1.0
    return StateVector(amps, owners)


def basis_state(bits: Sequence[int], owners: Sequence[int] | None = None) -> StateVector:
    amps = np.zeros(1 << len(bits), dtype=complex)
    amps[int("".join(str(int(b)) for b in bits) or "0", 2)] = 1.0
    return StateVector(amps, owners)


def qubit_state(alpha: complex, beta: complex, owner: int = 0) -> StateVector:
    return StateVector([alpha, beta], (owner,))


def prepare_ghz(m: int, owners: Sequence[int] | None = None) -> StateVector:
    """``(|0...0> + |1...1>) / sqrt(2)`` on ``m`` qubits."""
    if m < 1:
        raise InputError("GHZ state needs at least one qubit")
    amps = np.zeros(1 << m, dtype=complex)
    amps[0] = amps[-1] = 1 / math.sqrt(2)
    return StateVector(amps, owners)


# gates --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Gate:
    name: str
    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape not in ((2, 2), (4, 4)):
            raise InputError(f"gate {self.name} must be 2x2 or 4x4, got {mat.shape}")
        if not np.allclose(mat.conj().T @ mat, np.eye(mat.shape[0]), atol=NORM_TOL, rtol=0):
            raise InputError(f"gate {self.name} is not unitary")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def arity(self) -> int:
        return 1 if self.matrix.shape == (2, 2) else 2


_R = 1 / math.sqrt(2)
I = Gate("I", np.eye(2))
X = Gate("X", [[0, 1], [1, 0]])
Z = Gate("Z", [[1, 0], [0, -1]])
H = Gate("H", [[_R, _R], [_R, -_R]])
S = Gate("S", [[1, 0], [0, 1j]])
CNOT = Gate("CNOT", [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def phase(k: int) -> Gate:
    """``diag(1, i**k)``."""
    return _phase(k % 4)


@lru_cache(maxsize=None)
def _phase(k: int) -> Gate:
    return Gate(f"P(i^{k})", np.diag([1, 1j**k]))


def _check_targets(s: StateVector, targets: Sequence[int]) -> tuple[int, ...]:
    m = s.qubit_count
    if len(targets) == 1 and type(targets[0]) is int and 0 <= targets[0] < m:
        return (targets[0],)
    targets = tuple(int(q) for q in targets)
    if len(set(targets)) != len(targets):
        raise InputError(f"repeated target qubit in {targets}")
    for q in targets:
        if not 0 <= q < s.qubit_count:
            raise InputError(f"qubit {q} out of range for {s.qubit_count} qubits")
    return targets


def apply_gate(s: StateVector, g: Gate, targets: Sequence[int]) -> StateVector:
    """Apply ``g`` to ``targets`` (first target = most significant gate bit)."""
    targets = _check_targets(s, targets)
    if len(targets) != g.arity:
        raise InputError(f"gate {g.name} acts on {g.arity} qubit(s), got targets {targets}")
    m = s.qubit_count
    k = len(targets)
    if k == 1:
        (q,) = targets
        psi = g.matrix @ s.amplitudes.reshape(1 << q, 2, -1)
        return StateVector(psi.reshape(-1), s.owners, _checked=True)
    a, b = targets
    lo, hi = min(a, b), max(a, b)
    psi = s.amplitudes.reshape(1 << lo, 2, 1 << (hi - lo - 1), 2, -1)
    # gate tensor indices: (out_a, out_b, in_a, in_b)
    in_axes = [1, 3] if a < b else [3, 1]
    out = np.tensordot(g.matrix.reshape(2, 2, 2, 2), psi, axes=([2, 3], in_axes))
    # out axes: (out_a, out_b, rest0, rest1, rest2)
    order = (2, 0, 3, 1, 4) if a < b else (2, 1, 3, 0, 4)
    return StateVector(out.transpose(order).reshape(-1), s.owners, _checked=True)


# measurement --------------------------------------------------------------


def qubit_probabilities(s: StateVector, q: int) -> tuple[float, float]:
    (q,) = _check_targets(s, (q,))
    one = s.amplitudes.reshape(1 << q, 2, -1)[:, 1, :].ravel()
    p1 = float(np.vdot(one, one).real)
    return 1.0 - p1, p1


def collapse(s: StateVector, q: int, bit: int) -> StateVector:
    """Project qubit ``q`` onto ``|bit>`` and renormalize."""
    (q,) = _check_targets(s, (q,))
    psi = s.amplitudes.reshape(1 << q, 2, -1).copy()
    psi[:, 1 - bit, :] = 0
    norm = math.sqrt(float(np.sum(np.abs(psi) ** 2)))
    if norm == 0.0:
        raise InputError(f"outcome {bit} on qubit {q} has zero probability")
    return StateVector(psi.reshape(-1) / norm, s.owners, _checked=True)


def measure_qubit(s: StateVector, q: int, random: float) -> tuple[int, StateVector]:
    """Born-rule measurement driven by a uniform variate ``random`` in [0, 1)."""
    p0, p1 = qubit_probabilities(s, q)
    if p0 <= NORM_TOL or p1 <= NORM_TOL:
        bit = int(p0 <= NORM_TOL)
    else:
        # snapping keeps the split point exact for rational probabilities
        f = snap(p0)
        bit = 0 if random < (p0 if f is None else float(f)) else 1
    return bit, collapse(s, q, bit)


def remove_qubit(s: StateVector, q: int) -> StateVector:
    """Drop a qubit that sits in a computational basis state."""
    (q,) = _check_targets(s, (q,))
    psi = s.amplitudes.reshape(1 << q, 2, -1)
    w0 = float(np.sum(np.abs(psi[:, 0, :]) ** 2))
    if w0 > 1 - NORM_TOL:
        rest = psi[:, 0, :]
    elif w0 < NORM_TOL:
        rest = psi[:, 1, :]
    else:
        raise InputError(f"qubit {q} is not in a basis state; measure it first")
    rest = rest.reshape(-1)
    rest = rest / math.sqrt(float(np.vdot(rest, rest).real))
    return StateVector(rest, s.owners[:q] + s.owners[q + 1 :], _checked=True)


def project_out(s: StateVector, q: int, bit: int) -> StateVector:
    """Collapse qubit ``q`` onto ``|bit>`` and drop it in one step."""
    (q,) = _check_targets(s, (q,))
    rest = s.amplitudes.reshape(1 << q, 2, -1)[:, bit, :].reshape(-1)
    norm = math.sqrt(float(np.vdot(rest, rest).real))
    if norm == 0.0:
        raise InputError(f"outcome {bit} on qubit {q} has zero probability")
    return StateVector(rest / norm, s.owners[:q] + s.owners[q + 1 :], _checked=True)


@lru_cache(maxsize=4096)
def snap(p: float, max_den: int = 1024, tol: float = SNAP_TOL) -> Fraction | None:
    """Nearest multiple of ``1/max_den`` if within ``tol`` of ``p``, else None."""
    f = Fraction(round(p * max_den), max_den)
    return f if abs(float(f) - p) <= tol else None


def branch_enumerate(s: StateVector, qubits: Sequence[int]) -> list[tuple[tuple[int, ...], float, StateVector]]:
    """Every nonzero-probability outcome of measuring ``qubits`` in order."""
    qubits = _check_targets(s, qubits)
    branches = [((), 1.0, s)]
    for q in qubits:
        nxt = []
        for bits, p, st in branches:
            for bit, pb in enumerate(qubit_probabilities(st, q)):
                if pb > NORM_TOL:
                    nxt.append((bits + (bit,), p * pb, collapse(st, q, bit)))
        branches = nxt
    return branches


def exact_distribution(s: StateVector, n_nodes: int | None = None) -> Distribution:
    """Distribution of per-node readouts after measuring every qubit.

    A node's readout is the integer formed by its qubits' bits in qubit
    order; nodes owning no qubit read 0.  Probabilities become exact dyadic
    fractions when every one of them lies within ``SNAP_TOL`` of a multiple of
    ``2**-m``; otherwise they stay floats.
    """
    m = s.qubit_count
    n = (max(s.owners) + 1 if s.owners else 1) if n_nodes is None else n_nodes
    if any(not 0 <= o < n for o in s.owners):
        raise InputError(f"ownership {s.owners} references nodes outside 0..{n - 1}")
    probs = np.abs(s.amplitudes) ** 2
    entries = []
    for idx in np.flatnonzero(probs > NORM_TOL):
        bits = [(int(idx) >> (m - 1 - q)) & 1 for q in range(m)]
        y = [0] * n
        for q, b in enumerate(bits):
            y[s.owners[q]] = 2 * y[s.owners[q]] + b
        entries.append((tuple(y), float(probs[idx])))
    snapped = [snap(p, 1 << min(m, MAX_QUBITS)) for _, p in entries]
    if all(f is not None for f in snapped) and sum(snapped) == 1:
        entries = [(y, f) for (y, _), f in zip(entries, snapped)]
    return merge_duplicates(entries, range(n))


def teleport(
    s: StateVector, source: int, bell_a: int, bell_b: int, randoms: tuple[float, float]
) -> StateVector:
    """Move the state of ``source`` onto ``bell_b`` through the pair (``bell_a``, ``bell_b``).

    The pair must hold ``(|00> + |11>)/sqrt(2)`` and be unentangled with the
    rest; that precondition is the caller's responsibility.  ``source`` and
    ``bell_a`` are left measured (in basis states) in the returned state.
    """
    _check_targets(s, (source, bell_a, bell_b))
    s = apply_gate(s, CNOT, (source, bell_a))
    s = apply_gate(s, H, (source,))
    m_src, s = measure_qubit(s, source, randoms[0])
    m_a, s = measure_qubit(s, bell_a, randoms[1])
    if m_a:
        s = apply_gate(s, X, (bell_b,))
    if m_src:
        s = apply_gate(s, Z, (bell_b,))
    return s


def bell_pairs(pairs: Sequence[tuple[int, int]]) -> StateVector:
    """Product of Bell pairs, pair ``i`` on qubits ``2i, 2i+1`` owned by ``pairs[i]``."""
    state = StateVector(np.ones(1, dtype=complex), ())
    for u, v in pairs:
        state = state.tensor(prepare_ghz(2, (u, v)))
    return state
