"""Schedule ops, the line-oriented export format, and the timing model."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from enum import Enum

from zar.arch import Architecture, Point


class OpKind(Enum):
    LOAD = "LOAD"
    MOVE = "MOVE"
    STORE = "STORE"
    RYDBERG = "RYDBERG"
    GATE1Q = "GATE1Q"


@dataclass(frozen=True)
class ScheduleOp:
    """One primitive operation.

    ``positions`` are the current positions of ``qubits`` (for MOVE: the start
    points); ``targets`` are MOVE end points. RYDBERG and GATE1Q carry circuit
    gate indices in ``gates``; GATE1Q also names its logical qubits in ``qubits``
    (empty for a global gate).
    """

    kind: OpKind
    qubits: tuple[int, ...] = ()
    positions: tuple[Point, ...] = ()
    targets: tuple[Point, ...] = ()
    gates: tuple[int, ...] = ()
    label: str = ""
    start: float = 0.0
    duration: float = 0.0

    @property
    def end(self) -> float:
        return self.start + self.duration


@dataclass
class Schedule:
    ops: list[ScheduleOp] = field(default_factory=list)
    initial_positions: dict[int, Point] = field(default_factory=dict)
    atoms_per_qubit: int = 1
    strategy: str = ""

    @property
    def provenance(self) -> dict[int, int]:
        """CZ gate index -> index of the RYDBERG op realizing it."""
        out = {}
        for i, op in enumerate(self.ops):
            if op.kind is OpKind.RYDBERG:
                for g in op.gates:
                    out[g] = i
        return out

    @property
    def final_positions(self) -> dict[int, Point]:
        pos = dict(self.initial_positions)
        for op in self.ops:
            if op.kind is OpKind.MOVE:
                pos.update(zip(op.qubits, op.targets))
        return pos

    def count(self, kind: OpKind) -> int:
        return sum(1 for op in self.ops if op.kind is kind)

    @property
    def duration(self) -> float:
        return self.ops[-1].end if self.ops else 0.0


@dataclass(frozen=True)
class RoutingStats:
    load_store_time: float = 0.0
    shuttle_time: float = 0.0
    rydberg_count: int = 0
    cz_count: int = 0
    gate_time: float = 0.0
    compile_time: float = 0.0  # seconds of wall clock

    @property
    def routing_overhead(self) -> float:
        return self.load_store_time + self.shuttle_time

    @property
    def avg_parallel_cz(self) -> float:
        return self.cz_count / self.rydberg_count if self.rydberg_count else 0.0

    def as_dict(self) -> dict[str, float | int]:
        return {
            "load_store_time": self.load_store_time,
            "shuttle_time": self.shuttle_time,
            "routing_overhead": self.routing_overhead,
            "rydberg_count": self.rydberg_count,
            "cz_count": self.cz_count,
            "avg_parallel_cz": self.avg_parallel_cz,
            "compile_time": self.compile_time,
        }

    def to_lines(self) -> str:
        out = []
        for k, v in self.as_dict().items():
            out.append(f"{k}={v:.3f}" if isinstance(v, float) else f"{k}={v}")
        return "\n".join(out) + "\n"


def move_distance(op: ScheduleOp) -> float:
    return max((math.dist(p, q) for p, q in zip(op.positions, op.targets)), default=0.0)


def op_duration(op: ScheduleOp, a: Architecture) -> float:
    if op.kind is OpKind.LOAD:
        return a.t_load
    if op.kind is OpKind.STORE:
        return a.t_store
    if op.kind is OpKind.RYDBERG:
        return a.t_cz
    if op.kind is OpKind.GATE1Q:
        return a.t_1q
    return move_distance(op) / a.shuttle_speed


def apply_timing(s: Schedule, a: Architecture, compile_time: float = 0.0) -> tuple[Schedule, RoutingStats]:
    """Serial timing: every op starts when the previous one ends."""
    t = 0.0
    ops = []
    load_store = shuttle = gate_time = 0.0
    rydberg = czs = 0
    for op in s.ops:
        d = op_duration(op, a)
        ops.append(replace(op, start=t, duration=d))
        t += d
        if op.kind in (OpKind.LOAD, OpKind.STORE):
            load_store += d
        elif op.kind is OpKind.MOVE:
            shuttle += d
        else:
            gate_time += d
            if op.kind is OpKind.RYDBERG:
                rydberg += 1
                czs += len(op.gates)
    timed = replace(s, ops=ops)
    return timed, RoutingStats(load_store, shuttle, rydberg, czs, gate_time, compile_time)


def stats_of(s: Schedule) -> RoutingStats:
    """Recompute stats from an already-timed schedule."""
    load_store = sum(op.duration for op in s.ops if op.kind in (OpKind.LOAD, OpKind.STORE))
    shuttle = sum(op.duration for op in s.ops if op.kind is OpKind.MOVE)
    ryd = [op for op in s.ops if op.kind is OpKind.RYDBERG]
    gate_time = sum(op.duration for op in s.ops if op.kind in (OpKind.RYDBERG, OpKind.GATE1Q))
    return RoutingStats(load_store, shuttle, len(ryd), sum(len(op.gates) for op in ryd), gate_time)


# -- text format ------------------------------------------------------------------


def _f(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def _pt(p: Point) -> str:
    return f"({_f(p[0])},{_f(p[1])})"


def format_op(op: ScheduleOp) -> str:
    head = f"t={_f(op.start)} dur={_f(op.duration)} {op.kind.value}"
    if op.kind is OpKind.MOVE:
        body = " ".join(f"q{q}:{_pt(p)}->{_pt(r)}" for q, p, r in zip(op.qubits, op.positions, op.targets))
    elif op.kind in (OpKind.LOAD, OpKind.STORE):
        body = " ".join(f"q{q}:{_pt(p)}" for q, p in zip(op.qubits, op.positions))
    elif op.kind is OpKind.RYDBERG:
        body = " ".join(f"g{g}" for g in op.gates)
    else:
        target = " ".join(f"q{q}" for q in op.qubits) if op.qubits else "all"
        body = f"g{op.gates[0]}:{op.label} {target}"
    return f"{head} {body}"


def format_schedule(s: Schedule) -> str:
    lines = [f"# schedule strategy={s.strategy or '-'} atoms_per_qubit={s.atoms_per_qubit}"]
    for q in sorted(s.initial_positions):
        lines.append(f"INIT q{q}:{_pt(s.initial_positions[q])}")
    lines.extend(format_op(op) for op in s.ops)
    return "\n".join(lines) + "\n"


class ScheduleFormatError(ValueError):
    pass


_NUM = r"-?\d+(?:\.\d+)?"
_PT = rf"\(({_NUM}),({_NUM})\)"
_QPOS = re.compile(rf"^q(\d+):{_PT}$")
_QMOVE = re.compile(rf"^q(\d+):{_PT}->{_PT}$")
_HEAD = re.compile(rf"^t=({_NUM}) dur=({_NUM}) (LOAD|MOVE|STORE|RYDBERG|GATE1Q)(?: (.*))?$")


def parse_schedule(text: str) -> Schedule:
    s = Schedule()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for key, val in re.findall(r"(\w+)=(\S+)", line):
                if key == "strategy":
                    s.strategy = "" if val == "-" else val
                elif key == "atoms_per_qubit":
                    s.atoms_per_qubit = int(val)
            continue
        try:
            if line.startswith("INIT "):
                for tok in line.split()[1:]:
                    m = _QPOS.match(tok)
                    if not m:
                        raise ScheduleFormatError(tok)
                    s.initial_positions[int(m[1])] = (float(m[2]), float(m[3]))
                continue
            m = _HEAD.match(line)
            if not m:
                raise ScheduleFormatError(line)
            s.ops.append(_parse_op(OpKind(m[3]), float(m[1]), float(m[2]), (m[4] or "").split()))
        except (ScheduleFormatError, ValueError, IndexError) as exc:
            raise ScheduleFormatError(f"line {lineno}: cannot parse {exc}") from None
    return s


def _parse_op(kind: OpKind, start: float, dur: float, toks: list[str]) -> ScheduleOp:
    if kind is OpKind.MOVE:
        qs, ps, ts = [], [], []
        for tok in toks:
            m = _QMOVE.match(tok)
            if not m:
                raise ScheduleFormatError(tok)
            qs.append(int(m[1]))
            ps.append((float(m[2]), float(m[3])))
            ts.append((float(m[4]), float(m[5])))
        return ScheduleOp(kind, tuple(qs), tuple(ps), tuple(ts), start=start, duration=dur)
    if kind in (OpKind.LOAD, OpKind.STORE):
        qs, ps = [], []
        for tok in toks:
            m = _QPOS.match(tok)
            if not m:
                raise ScheduleFormatError(tok)
            qs.append(int(m[1]))
            ps.append((float(m[2]), float(m[3])))
        return ScheduleOp(kind, tuple(qs), tuple(ps), start=start, duration=dur)
    if kind is OpKind.RYDBERG:
        gates = tuple(int(tok.removeprefix("g")) for tok in toks)
        return ScheduleOp(kind, gates=gates, start=start, duration=dur)
    gate, label = toks[0].split(":", 1)
    qubits = () if toks[1:] == ["all"] else tuple(int(t.removeprefix("q")) for t in toks[1:])
    return ScheduleOp(kind, qubits, gates=(int(gate.removeprefix("g")),), label=label, start=start, duration=dur)
