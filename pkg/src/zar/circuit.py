"""Circuit IR: transversal CZ / single-qubit gates, text format, executable front."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

DIAGONAL_LABELS = frozenset({"z", "rz", "s", "t", "p"})


class GateKind(Enum):
    CZ = "cz"
    LOCAL = "u1"
    GLOBAL = "uglobal"


class CircuitError(ValueError):
    """Malformed circuit text or an invalid gate."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    index: int
    qubits: tuple[int, ...] = ()
    label: str = ""

    @property
    def is_cz(self) -> bool:
        return self.kind is GateKind.CZ

    def support(self, num_qubits: int) -> frozenset[int]:
        if self.kind is GateKind.GLOBAL:
            return frozenset(range(num_qubits))
        return frozenset(self.qubits)

    def is_diagonal(self, diagonal: frozenset[str] = DIAGONAL_LABELS) -> bool:
        return self.kind is GateKind.CZ or self.label.lower() in diagonal

    def to_line(self) -> str:
        if self.kind is GateKind.CZ:
            return f"cz {self.qubits[0]} {self.qubits[1]}"
        if self.kind is GateKind.LOCAL:
            return f"u1 {self.label} {self.qubits[0]}"
        return f"uglobal {self.label}"


def cz(index: int, a: int, b: int) -> Gate:
    return Gate(GateKind.CZ, index, (a, b))


def local(index: int, q: int, label: str) -> Gate:
    return Gate(GateKind.LOCAL, index, (q,), label)


def global_gate(index: int, label: str) -> Gate:
    return Gate(GateKind.GLOBAL, index, (), label)


def commute(g: Gate, h: Gate, num_qubits: int, diagonal: frozenset[str] = DIAGONAL_LABELS) -> bool:
    """Disjoint supports, or both gates diagonal in the computational basis."""
    if g.support(num_qubits).isdisjoint(h.support(num_qubits)):
        return True
    return g.is_diagonal(diagonal) and h.is_diagonal(diagonal)


@dataclass
class Circuit:
    num_qubits: int
    gates: list[Gate]
    executed: list[bool] = field(default_factory=list)
    diagonal: frozenset[str] = DIAGONAL_LABELS

    def __post_init__(self) -> None:
        if not self.executed:
            self.executed = [False] * len(self.gates)
        for pos, g in enumerate(self.gates):
            if g.index != pos:
                raise CircuitError(f"gate index {g.index} at position {pos}")
            _check_gate(g, self.num_qubits)
        # per-qubit pending gate indices, in circuit order; executed entries skipped lazily
        self._pending: list[list[int]] = [[] for _ in range(self.num_qubits)]
        self._globals: list[int] = []
        for g in self.gates:
            if g.kind is GateKind.GLOBAL:
                self._globals.append(g.index)
                for q in range(self.num_qubits):
                    self._pending[q].append(g.index)
            else:
                for q in g.qubits:
                    self._pending[q].append(g.index)
        self._heads = [0] * self.num_qubits

    @property
    def cz_count(self) -> int:
        return sum(1 for g in self.gates if g.is_cz)

    @property
    def done(self) -> bool:
        return all(self.executed)

    def copy(self) -> Circuit:
        """Fresh circuit with the same gates and executed flags."""
        c = Circuit(self.num_qubits, list(self.gates), diagonal=self.diagonal)
        for i, flag in enumerate(self.executed):
            if flag:
                c.executed[i] = True
        return c

    def reset(self) -> Circuit:
        return Circuit(self.num_qubits, list(self.gates), diagonal=self.diagonal)

    def to_text(self) -> str:
        lines = [f"qubits {self.num_qubits}"]
        lines.extend(g.to_line() for g in self.gates)
        return "\n".join(lines) + "\n"

    def _qubit_ok(self, q: int) -> set[int]:
        # Commutation on a single qubit reduces to: a diagonal prefix is free,
        # a non-diagonal gate is free only at the head of the pending list.
        pending = self._pending[q]
        head = self._heads[q]
        while head < len(pending) and self.executed[pending[head]]:
            head += 1
        self._heads[q] = head
        ok: set[int] = set()
        first = True
        for idx in pending[head:]:
            if self.executed[idx]:
                continue
            g = self.gates[idx]
            if g.is_diagonal(self.diagonal):
                ok.add(idx)
            else:
                if first:
                    ok.add(idx)
                break
            first = False
        return ok

    def front(self) -> set[int]:
        return executable_front(self)


def _check_gate(g: Gate, num_qubits: int, line: int | None = None) -> None:
    for q in g.qubits:
        if not 0 <= q < num_qubits:
            raise CircuitError(f"qubit id {q} out of range for {num_qubits} qubits", line)
    if g.kind is GateKind.CZ and g.qubits[0] == g.qubits[1]:
        raise CircuitError("CZ with identical qubits", line)


def parse_circuit(text: str, diagonal: Iterable[str] = DIAGONAL_LABELS) -> Circuit:
    """Parse the line-oriented circuit format.

    ``qubits N`` must be the first non-comment line; each further line is one of
    ``cz A B``, ``u1 LABEL Q`` or ``uglobal LABEL``. ``#`` starts a comment.
    """
    num_qubits: int | None = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0].lower()
        if num_qubits is None:
            if head != "qubits" or len(parts) != 2:
                raise CircuitError("expected 'qubits N' header", lineno)
            num_qubits = _int(parts[1], lineno)
            if num_qubits < 0:
                raise CircuitError("negative qubit count", lineno)
            continue
        idx = len(gates)
        if head == "cz" and len(parts) == 3:
            g = cz(idx, _int(parts[1], lineno), _int(parts[2], lineno))
        elif head == "u1" and len(parts) == 3:
            g = local(idx, _int(parts[2], lineno), parts[1])
        elif head == "uglobal" and len(parts) == 2:
            g = global_gate(idx, parts[1])
        else:
            raise CircuitError(f"syntax error: {raw.strip()!r}", lineno)
        _check_gate(g, num_qubits, lineno)
        gates.append(g)
    if num_qubits is None:
        raise CircuitError("missing 'qubits N' header")
    return Circuit(num_qubits, gates, diagonal=frozenset(d.lower() for d in diagonal))


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok, 10)
    except ValueError:
        raise CircuitError(f"expected integer, got {tok!r}", lineno) from None


def executable_front(c: Circuit) -> set[int]:
    """Unexecuted gates that commute with every unexecuted earlier gate on a shared qubit."""
    ok_per_qubit: list[set[int] | None] = [None] * c.num_qubits

    def ok(q: int) -> set[int]:
        cached = ok_per_qubit[q]
        if cached is None:
            cached = ok_per_qubit[q] = c._qubit_ok(q)
        return cached

    front: set[int] = set()
    candidates: set[int] = set()
    for q in range(c.num_qubits):
        candidates |= ok(q)
    for idx in candidates:
        g = c.gates[idx]
        qubits = range(c.num_qubits) if g.kind is GateKind.GLOBAL else g.qubits
        if all(idx in ok(q) for q in qubits):
            front.add(idx)
    return front


def is_executable(c: Circuit, idx: int) -> bool:
    """Membership test for the front without computing all of it."""
    if c.executed[idx]:
        return False
    g = c.gates[idx]
    qubits = range(c.num_qubits) if g.kind is GateKind.GLOBAL else g.qubits
    return all(idx in c._qubit_ok(q) for q in qubits)


def mark_executed(c: Circuit, indices: Iterable[int]) -> Circuit:
    """Flag ``indices`` executed; every index must be in the current front."""
    indices = set(indices)
    if not indices:
        return c
    bad = sorted(i for i in indices if not is_executable(c, i))
    if bad:
        raise CircuitError(f"gates {bad} are not executable")
    for idx in indices:
        c.executed[idx] = True
    return c
