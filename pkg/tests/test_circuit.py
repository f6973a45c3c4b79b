import itertools
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zar.circuit import (
    Circuit,
    CircuitError,
    GateKind,
    commute,
    cz,
    executable_front,
    global_gate,
    is_executable,
    local,
    mark_executed,
    parse_circuit,
)

_S2 = np.sqrt(0.5)
ONE_QUBIT = {
    "h": np.array([[_S2, _S2], [_S2, -_S2]]),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "sx": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]),
    "ry": np.array([[np.cos(0.3), -np.sin(0.3)], [np.sin(0.3), np.cos(0.3)]]),
    "z": np.diag([1, -1]).astype(complex),
    "s": np.diag([1, 1j]),
    "t": np.diag([1, np.exp(1j * np.pi / 4)]),
    "rz": np.diag([np.exp(-0.2j), np.exp(0.2j)]),
    "p": np.diag([1, np.exp(0.7j)]),
}


def unitary(g, n):
    """Dense matrix of ``g`` on n qubits, qubit 0 most significant."""
    if g.kind is GateKind.CZ:
        diag = [(-1.0 if (b >> (n - 1 - g.qubits[0])) & 1 and (b >> (n - 1 - g.qubits[1])) & 1 else 1.0) for b in range(2**n)]
        return np.diag(diag).astype(complex)
    u = ONE_QUBIT[g.label]
    eye = np.eye(2)
    if g.kind is GateKind.GLOBAL:
        return reduce(np.kron, [u] * n)
    return reduce(np.kron, [u if q == g.qubits[0] else eye for q in range(n)])


def all_gates(n):
    out = [cz(0, a, b) for a, b in itertools.combinations(range(n), 2)]
    out += [local(0, q, lab) for q in range(n) for lab in ONE_QUBIT]
    out += [global_gate(0, lab) for lab in ONE_QUBIT]
    return out


@pytest.mark.parametrize("n", [2, 3])
def test_commute_rule_is_sound_against_matrices(n):
    # every pair the rule calls commuting must commute as 2^n x 2^n matrices
    gates = all_gates(n)
    for g, h in itertools.product(gates, repeat=2):
        if commute(g, h, n):
            a, b = unitary(g, n), unitary(h, n)
            assert np.allclose(a @ b, b @ a), (g, h)


def test_commute_rule_exact_on_canonical_pairs():
    n = 2
    cases = [
        (cz(0, 0, 1), local(1, 0, "rz"), True),
        (cz(0, 0, 1), local(1, 1, "h"), False),
        (local(0, 0, "h"), local(1, 1, "x"), True),
        (local(0, 0, "t"), global_gate(1, "rz"), True),
        (local(0, 0, "x"), global_gate(1, "ry"), False),
    ]
    for g, h, expected in cases:
        assert commute(g, h, n) is expected
        a, b = unitary(g, n), unitary(h, n)
        assert np.allclose(a @ b, b @ a) is expected


def test_parse_round_trip():
    text = "qubits 3\ncz 0 1\nu1 h 2  # comment\n\nuglobal ry\ncz 2 1\n"
    c = parse_circuit(text)
    assert c.num_qubits == 3
    assert [g.kind for g in c.gates] == [GateKind.CZ, GateKind.LOCAL, GateKind.GLOBAL, GateKind.CZ]
    assert parse_circuit(c.to_text()).gates == c.gates


@pytest.mark.parametrize(
    "text, line",
    [
        ("cz 0 1\n", 1),
        ("qubits 2\ncz 0 2\n", 2),
        ("qubits 2\ncz 1 1\n", 2),
        ("qubits 2\nfoo 1\n", 2),
        ("qubits 2\ncz a 1\n", 2),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(CircuitError) as info:
        parse_circuit(text)
    assert info.value.line == line


def test_missing_header():
    with pytest.raises(CircuitError):
        parse_circuit("# nothing\n")


def test_front_of_serial_chain():
    c = parse_circuit("qubits 3\ncz 0 1\nu1 h 1\ncz 1 2\n")
    assert executable_front(c) == {0}
    mark_executed(c, [0])
    assert executable_front(c) == {1}
    with pytest.raises(CircuitError):
        mark_executed(c, [2])


def test_diagonal_gates_commute_past_cz():
    c = parse_circuit("qubits 3\ncz 0 1\nu1 rz 1\ncz 1 2\nu1 h 2\n")
    assert executable_front(c) == {0, 1, 2}


def test_global_gate_blocks_everything():
    c = parse_circuit("qubits 2\nu1 h 0\nuglobal ry\nu1 x 1\n")
    assert executable_front(c) == {0}


def front_oracle(c):
    """Unexecuted gates commuting with every earlier unexecuted gate."""
    out = set()
    for g in c.gates:
        if c.executed[g.index]:
            continue
        earlier = [h for h in c.gates[: g.index] if not c.executed[h.index]]
        if all(commute(g, h, c.num_qubits, c.diagonal) for h in earlier):
            out.add(g.index)
    return out


@st.composite
def circuits(draw, max_qubits=5, max_gates=25):
    n = draw(st.integers(2, max_qubits))
    gates = []
    for i in range(draw(st.integers(0, max_gates))):
        kind = draw(st.sampled_from(["cz", "cz", "u1", "u1", "ug"]))
        if kind == "cz":
            a, b = draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
            gates.append(cz(i, a, b))
        elif kind == "u1":
            gates.append(local(i, draw(st.integers(0, n - 1)), draw(st.sampled_from(sorted(ONE_QUBIT)))))
        else:
            gates.append(global_gate(i, draw(st.sampled_from(["ry", "rz"]))))
    return Circuit(n, gates)


@given(circuits(), st.randoms(use_true_random=False))
def test_front_matches_pairwise_oracle(c, rnd):
    while not c.done:
        front = executable_front(c)
        assert front == front_oracle(c)
        assert front, "a non-empty circuit always has an executable gate"
        assert all(is_executable(c, i) for i in front)
        pick = [i for i in sorted(front) if rnd.random() < 0.5] or [min(front)]
        mark_executed(c, pick)


@given(circuits())
def test_reset_and_copy(c):
    if c.gates:
        mark_executed(c, [min(executable_front(c))])
    d = c.copy()
    assert d.executed == c.executed
    assert not any(c.reset().executed)
