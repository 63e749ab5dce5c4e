import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlocal import quantum as qm
from qlocal.errors import CapacityError, InputError
from qlocal.outcomes import Distribution

R = 1 / math.sqrt(2)
PLUS = qm.qubit_state(R, R)


def random_unitary(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_state(rng, m, owners=None):
    v = rng.normal(size=1 << m) + 1j * rng.normal(size=1 << m)
    return qm.StateVector(v / np.linalg.norm(v), owners)


def reference_apply(s, matrix, targets):
    # build the full 2^m operator from Kronecker products and a permutation
    m = s.qubit_count
    k = len(targets)
    rest = [q for q in range(m) if q not in targets]
    perm = list(targets) + rest
    psi = s.amplitudes.reshape([2] * m).transpose(perm).reshape(1 << k, -1)
    psi = (matrix @ psi).reshape([2] * m)
    return np.moveaxis(psi, range(m), perm).reshape(-1)


def test_ghz_amplitudes():
    g3 = qm.prepare_ghz(3).amplitudes
    assert g3[0] == pytest.approx(R) and g3[7] == pytest.approx(R)
    assert np.count_nonzero(np.abs(g3) > 1e-15) == 2
    assert np.allclose(qm.prepare_ghz(1).amplitudes, [R, R])
    assert np.allclose(qm.prepare_ghz(2).amplitudes, [R, 0, 0, R])
    with pytest.raises(InputError):
        qm.prepare_ghz(0)


def test_gate_examples():
    assert np.allclose(qm.apply_gate(qm.zero_state(1), qm.H, [0]).amplitudes, [R, R])
    s = random_state(np.random.default_rng(1), 3)
    assert np.allclose(qm.apply_gate(s, qm.I, [1]).amplitudes, s.amplitudes)
    t = qm.apply_gate(qm.apply_gate(PLUS, qm.S, [0]), qm.S, [0])
    t = qm.apply_gate(t, qm.H, [0])
    assert qm.measure_qubit(t, 0, 0.0)[0] == 1
    assert qm.qubit_probabilities(t, 0)[1] == pytest.approx(1, abs=1e-12)


def test_phase_gate_powers():
    assert np.allclose(qm.phase(1).matrix, qm.S.matrix)
    assert np.allclose(qm.phase(2).matrix, qm.Z.matrix)
    assert np.allclose(qm.phase(5).matrix, qm.S.matrix)


@pytest.mark.parametrize("targets", [[0, 0], [3], [0, 1, 2]])
def test_gate_target_errors(targets):
    s = qm.zero_state(3)
    gate = qm.CNOT if len(targets) != 1 else qm.H
    with pytest.raises(InputError):
        qm.apply_gate(s, gate, targets)


def test_non_unitary_gate_rejected():
    with pytest.raises(InputError):
        qm.Gate("bad", [[1, 1], [0, 1]])
    with pytest.raises(InputError):
        qm.Gate("bad", np.eye(3))


def test_state_validation():
    with pytest.raises(InputError):
        qm.StateVector([1, 1])
    with pytest.raises(InputError):
        qm.StateVector([1, 0, 0])
    with pytest.raises(InputError):
        qm.StateVector([1, 0], owners=(0, 1))
    with pytest.raises(CapacityError):
        qm.zero_state(qm.MAX_QUBITS).tensor(qm.zero_state(1))


def test_measure_examples():
    bit, s = qm.measure_qubit(qm.zero_state(1), 0, 0.99)
    assert bit == 0 and np.allclose(s.amplitudes, [1, 0])
    assert qm.measure_qubit(PLUS, 0, 0.49)[0] == 0
    bit, s = qm.measure_qubit(PLUS, 0, 0.5)
    assert bit == 1 and np.allclose(s.amplitudes, [0, 1])
    bit, s = qm.measure_qubit(qm.prepare_ghz(3), 0, 0.1)
    rest = qm.remove_qubit(s, 0)
    assert bit == 0 and np.allclose(rest.amplitudes, [1, 0, 0, 0])


def test_remove_qubit_needs_basis_state():
    with pytest.raises(InputError):
        qm.remove_qubit(PLUS, 0)


def test_project_out_matches_collapse_then_remove():
    s = random_state(np.random.default_rng(3), 4, (0, 1, 1, 2))
    for q in range(4):
        for bit in (0, 1):
            a = qm.project_out(s, q, bit)
            b = qm.remove_qubit(qm.collapse(s, q, bit), q)
            assert np.allclose(a.amplitudes, b.amplitudes) and a.owners == b.owners


def test_exact_distribution_examples():
    assert qm.exact_distribution(qm.zero_state(3)) == Distribution.point((0, 0, 0))
    plus2 = PLUS.tensor(qm.qubit_state(R, R, owner=1))
    assert qm.exact_distribution(plus2) == Distribution.uniform([(0, 0), (0, 1), (1, 0), (1, 1)])


def test_exact_distribution_groups_bits_by_owner():
    s = qm.basis_state([1, 0, 1], owners=(1, 0, 1))
    assert qm.exact_distribution(s) == Distribution.point((0, 3))
    assert qm.exact_distribution(s, n_nodes=3) == Distribution.point((0, 3, 0))


def test_exact_distribution_floats_for_irrational_probabilities():
    theta = 0.3
    d = qm.exact_distribution(qm.qubit_state(math.cos(theta), math.sin(theta)))
    assert not d.exact
    assert float(d.prob((0,))) == pytest.approx(math.cos(theta) ** 2)


def test_branch_enumerate_examples():
    (only,) = qm.branch_enumerate(qm.zero_state(1), [0])
    assert only[0] == (0,) and only[1] == pytest.approx(1)
    assert [p for _, p, _ in qm.branch_enumerate(PLUS, [0])] == pytest.approx([0.5, 0.5])
    ghz = qm.branch_enumerate(qm.prepare_ghz(3), [0, 1, 2])
    assert [b for b, _, _ in ghz] == [(0, 0, 0), (1, 1, 1)]
    assert [p for _, p, _ in ghz] == pytest.approx([0.5, 0.5])


def test_snap():
    assert qm.snap(0.25 + 1e-12) == F(1, 4)
    assert qm.snap(0.3) is None


def _teleported(psi_in, randoms):
    s = psi_in.tensor(qm.bell_pairs([(0, 1)]))
    out = qm.teleport(s, 0, 1, 2, randoms)
    return qm.remove_qubit(qm.remove_qubit(out, 0), 0)


BRANCHES = [(0.0, 0.0), (0.0, 0.99), (0.99, 0.0), (0.99, 0.99)]


@pytest.mark.parametrize("randoms", BRANCHES)
def test_teleport_basis_and_plus(randoms):
    assert np.allclose(_teleported(qm.zero_state(1), randoms).amplitudes, [1, 0])
    assert np.allclose(_teleported(PLUS, randoms).amplitudes, [R, R])


def test_teleport_visits_all_four_branches():
    seen = set()
    for r in BRANCHES:
        s = qm.apply_gate(qm.zero_state(1), qm.H, [0]).tensor(qm.bell_pairs([(0, 1)]))
        s = qm.apply_gate(qm.apply_gate(s, qm.CNOT, (0, 1)), qm.H, (0,))
        a, s = qm.measure_qubit(s, 0, r[0])
        b, _ = qm.measure_qubit(s, 1, r[1])
        seen.add((a, b))
    assert len(seen) == 4


def test_teleport_fidelity_random_states():
    rng = np.random.default_rng(7)
    for _ in range(50):
        psi = random_state(rng, 1)
        for r in BRANCHES:
            out = _teleported(psi, r)
            assert abs(np.vdot(out.amplitudes, psi.amplitudes)) ** 2 == pytest.approx(1, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 5))
def test_apply_gate_matches_reference(seed, m):
    rng = np.random.default_rng(seed)
    s = random_state(rng, m)
    a, b = rng.choice(m, size=2, replace=False)
    u2 = random_unitary(rng, 4)
    got = qm.apply_gate(s, qm.Gate("U", u2), (int(a), int(b))).amplitudes
    assert np.allclose(got, reference_apply(s, u2, [int(a), int(b)]), atol=1e-12)
    u1 = random_unitary(rng, 2)
    got = qm.apply_gate(s, qm.Gate("V", u1), (int(a),)).amplitudes
    assert np.allclose(got, reference_apply(s, u1, [int(a)]), atol=1e-12)
    assert abs(np.linalg.norm(got) - 1) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_disjoint_gates_commute(seed):
    rng = np.random.default_rng(seed)
    s = random_state(rng, 4)
    order = [int(q) for q in rng.permutation(4)]
    g1, g2 = qm.Gate("A", random_unitary(rng, 4)), qm.Gate("B", random_unitary(rng, 2))
    ab = qm.apply_gate(qm.apply_gate(s, g1, order[:2]), g2, order[2:3])
    ba = qm.apply_gate(qm.apply_gate(s, g2, order[2:3]), g1, order[:2])
    assert np.max(np.abs(ab.amplitudes - ba.amplitudes)) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_branch_probabilities_sum_to_one(seed, m):
    rng = np.random.default_rng(seed)
    s = random_state(rng, m)
    qubits = [int(q) for q in rng.permutation(m)[: rng.integers(1, m + 1)]]
    branches = qm.branch_enumerate(s, qubits)
    assert abs(sum(p for _, p, _ in branches) - 1) <= 1e-12
