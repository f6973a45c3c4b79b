"""Replay checker for schedules.

Re-derives trap state from the op list alone and reports every breach of
the shuttling constraints (a)-(d), interaction exclusivity (e) and circuit
semantics (f). Coordinates are compared with a tolerance that absorbs the
3-decimal rounding of the text format.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from zar.arch import Architecture, Point
from zar.circuit import Circuit, GateKind, is_executable
from zar.schedule import OpKind, Schedule, ScheduleOp

TOL = 2e-3
FRACTIONS = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class Violation:
    op: int
    constraint: str  # "a".."f" or "state"
    detail: str

    def __str__(self) -> str:
        return f"op={self.op} constraint={self.constraint} detail={self.detail}"


def _close(p: Point, q: Point) -> bool:
    return abs(p[0] - q[0]) <= TOL and abs(p[1] - q[1]) <= TOL


@dataclass
class SimState:
    """Trap state of every atom plus the active AOD beams.

    ``row_of``/``col_of`` map loaded atoms to beam ids; ``rows``/``cols``
    hold beam coordinates.
    """

    pos: dict[int, Point]
    in_aod: set[int] = field(default_factory=set)
    row_of: dict[int, int] = field(default_factory=dict)
    col_of: dict[int, int] = field(default_factory=dict)
    rows: dict[int, float] = field(default_factory=dict)
    cols: dict[int, float] = field(default_factory=dict)
    _next_beam: int = 0

    def slm_atoms(self) -> list[int]:
        return [q for q in self.pos if q not in self.in_aod]

    def _beam(self, beams: dict[int, float], coord: float) -> int:
        for b, v in beams.items():
            if abs(v - coord) <= TOL:
                return b
        self._next_beam += 1
        beams[self._next_beam] = coord
        return self._next_beam

    def attach(self, atom: int) -> None:
        x, y = self.pos[atom]
        self.in_aod.add(atom)
        self.row_of[atom] = self._beam(self.rows, y)
        self.col_of[atom] = self._beam(self.cols, x)

    def detach(self, atom: int) -> None:
        self.in_aod.discard(atom)
        r = self.row_of.pop(atom)
        c = self.col_of.pop(atom)
        if r not in self.row_of.values():
            del self.rows[r]
        if c not in self.col_of.values():
            del self.cols[c]


class _Replay:
    def __init__(self, s: Schedule, c: Circuit, a: Architecture):
        self.s = s
        self.a = a
        self.circuit = c.reset()
        self.n = s.atoms_per_qubit
        self.state = SimState(dict(s.initial_positions))
        self.out: list[Violation] = []
        self.realized: set[int] = set()

    def report(self, i: int, kind: str, detail: str) -> None:
        self.out.append(Violation(i, kind, detail))

    def run(self) -> list[Violation]:
        if self.n != self.a.atoms_per_qubit:
            self.report(0, "state", f"schedule has {self.n} atoms per qubit, architecture {self.a.atoms_per_qubit}")
        expected = self.circuit.num_qubits * self.n
        if set(self.state.pos) != set(range(expected)):
            self.report(0, "state", f"initial positions cover {len(self.state.pos)} atoms, expected {expected}")
        storage = self.a.storage
        for q, p in self.state.pos.items():
            if not storage.contains(p, TOL):
                self.report(0, "state", f"atom {q} starts outside storage")
        prev_end = 0.0
        for i, op in enumerate(self.s.ops):
            if op.start + TOL < prev_end:
                self.report(i, "state", "op overlaps its predecessor in time")
            prev_end = op.end
            handler = {
                OpKind.LOAD: self.load,
                OpKind.STORE: self.store,
                OpKind.MOVE: self.move,
                OpKind.RYDBERG: self.rydberg,
                OpKind.GATE1Q: self.gate1q,
            }[op.kind]
            handler(i, op)
        end = len(self.s.ops)
        if self.state.in_aod:
            self.report(end, "state", f"{len(self.state.in_aod)} atoms left in the AOD")
        missing = [g.index for g in self.circuit.gates if not self.circuit.executed[g.index]]
        if missing:
            self.report(end, "f", f"gates never realized: {missing[:10]}")
        return self.out

    # -- trap ops -----------------------------------------------------------------

    def _known(self, i: int, op: ScheduleOp) -> bool:
        ok = True
        if not op.qubits:
            self.report(i, "state", "empty batch")
            ok = False
        if len(set(op.qubits)) != len(op.qubits):
            self.report(i, "state", "atom listed twice in one batch")
            ok = False
        for q, p in zip(op.qubits, op.positions):
            if q not in self.state.pos:
                self.report(i, "state", f"unknown atom {q}")
                ok = False
            elif not _close(self.state.pos[q], p):
                self.report(i, "state", f"atom {q} is at {self.state.pos[q]}, op says {p}")
                ok = False
        return ok

    def load(self, i: int, op: ScheduleOp) -> None:
        if not self._known(i, op):
            return
        st = self.state
        for q in op.qubits:
            if q in st.in_aod:
                self.report(i, "state", f"atom {q} already in the AOD")
                return
        for q in op.qubits:
            st.attach(q)
        self._check_order(i, [(v, v) for v in st.rows.values()], "row")
        self._check_order(i, [(v, v) for v in st.cols.values()], "column")
        self._ghosts(i)

    def store(self, i: int, op: ScheduleOp) -> None:
        if not self._known(i, op):
            return
        st = self.state
        zones = (self.a.storage, self.a.entangling)
        slm = [st.pos[q] for q in st.slm_atoms()]
        for q in op.qubits:
            if q not in st.in_aod:
                self.report(i, "state", f"atom {q} is not in the AOD")
                return
        for q in op.qubits:
            p = st.pos[q]
            if not any(z.contains(p, TOL) for z in zones):
                self.report(i, "state", f"atom {q} stored outside storage/entangling zones at {p}")
            if any(_close(p, r) for r in slm):
                self.report(i, "state", f"atom {q} stored onto an occupied trap at {p}")
            st.detach(q)

    def move(self, i: int, op: ScheduleOp) -> None:
        if not self._known(i, op):
            return
        st = self.state
        if len(op.targets) != len(op.qubits):
            self.report(i, "state", "move without a target per atom")
            return
        for q in op.qubits:
            if q not in st.in_aod:
                self.report(i, "state", f"atom {q} moved but not in the AOD")
                return
        target = dict(zip(op.qubits, op.targets))
        new_rows, new_cols = dict(st.rows), dict(st.cols)
        for beams, new, of, axis in ((st.rows, new_rows, st.row_of, 1), (st.cols, new_cols, st.col_of, 0)):
            ends: dict[int, set[float]] = {b: set() for b in beams}
            for q in st.in_aod:
                ends[of[q]].add(round(target[q][axis] if q in target else st.pos[q][axis], 3))
            for b, vals in ends.items():
                if max(vals) - min(vals) > TOL:
                    name = "row" if axis == 1 else "column"
                    self.report(i, "b", f"atoms of one AOD {name} end at {sorted(vals)}")
                new[b] = min(vals)
        self._check_order(i, [(st.rows[b], new_rows[b]) for b in st.rows], "row")
        self._check_order(i, [(st.cols[b], new_cols[b]) for b in st.cols], "column")
        st.rows, st.cols = new_rows, new_cols
        for q, t in target.items():
            st.pos[q] = t
        self._ghosts(i)

    def _check_order(self, i: int, beams: list[tuple[float, float]], name: str) -> None:
        """Beams sorted by start coordinate must stay sorted and separated along the path."""
        beams = sorted(beams)
        sep = self.a.aod_min_sep
        for (s0, e0), (s1, e1) in zip(beams, beams[1:]):
            for f in FRACTIONS:
                gap = (s1 + f * (e1 - s1)) - (s0 + f * (e0 - s0))
                if gap < sep - TOL:
                    self.report(i, "a", f"AOD {name}s {s0:.3f}->{e0:.3f} and {s1:.3f}->{e1:.3f} gap {gap:.3f} at {f}")
                    return

    def _ghosts(self, i: int) -> None:
        st = self.state
        if not st.in_aod:
            return
        slm = st.slm_atoms()
        if not slm:
            return
        if len(st.rows) * len(st.cols) == len(st.in_aod):
            return  # every intersection holds a loaded atom
        ys = np.fromiter(st.rows.values(), float)
        xs = np.fromiter(st.cols.values(), float)
        grid = np.stack(np.meshgrid(xs, ys), axis=-1).reshape(-1, 2)
        loaded = np.array([st.pos[q] for q in st.in_aod])
        d_loaded = np.abs(grid[:, None, :] - loaded[None, :, :]).max(axis=2).min(axis=1)
        ghosts = grid[d_loaded > TOL]
        if not len(ghosts):
            return
        fixed = np.array([st.pos[q] for q in slm])
        d = np.sqrt(((ghosts[:, None, :] - fixed[None, :, :]) ** 2).sum(axis=2))
        bad = np.argwhere(d < self.a.r_safe - TOL)
        if len(bad):
            g, k = bad[0]
            self.report(
                i, "c", f"ghost spot ({ghosts[g][0]:.3f},{ghosts[g][1]:.3f}) within r_safe of atom {slm[k]}"
            )

    # -- gates ----------------------------------------------------------------------

    def _realize(self, i: int, gates: tuple[int, ...], want_cz: bool) -> list[int]:
        c = self.circuit
        good = []
        for g in gates:
            if not 0 <= g < len(c.gates):
                self.report(i, "f", f"unknown gate {g}")
            elif g in self.realized:
                self.report(i, "f", f"gate {g} realized twice")
            elif c.gates[g].is_cz != want_cz:
                self.report(i, "f", f"gate {g} has the wrong kind for this op")
            elif not is_executable(c, g):
                self.report(i, "f", f"gate {g} is not executable yet")
            else:
                good.append(g)
        for g in good:
            c.executed[g] = True
            self.realized.add(g)
        return good

    def rydberg(self, i: int, op: ScheduleOp) -> None:
        if len(set(op.gates)) != len(op.gates):
            self.report(i, "f", "gate listed twice in one Rydberg op")
        self._realize(i, op.gates, want_cz=True)
        st = self.state
        n = self.n
        intended: set[tuple[int, int]] = set()
        # geometry is judged against what the op claims, even if (f) rejected it
        named = [g for g in op.gates if 0 <= g < len(self.circuit.gates) and self.circuit.gates[g].is_cz]
        for g in named:
            qa, qb = self.circuit.gates[g].qubits
            for k in range(n):
                u, v = qa * n + k, qb * n + k
                if u not in st.pos or v not in st.pos:
                    continue
                if (u in st.in_aod) == (v in st.in_aod):
                    where = "AOD" if u in st.in_aod else "SLM"
                    self.report(i, "d", f"gate {g}: atoms {u} and {v} both held in {where}")
                intended.add((min(u, v), max(u, v)))
        zone = self.a.entangling
        inside = sorted(q for q, p in st.pos.items() if zone.contains(p, TOL))
        inside_set = set(inside)
        for u, v in sorted(intended):
            if u not in inside_set or v not in inside_set:
                self.report(i, "e", f"pair {u},{v} is not in the entangling zone")
            elif math.dist(st.pos[u], st.pos[v]) > self.a.r_pair + TOL:
                self.report(i, "e", f"pair {u},{v} is {math.dist(st.pos[u], st.pos[v]):.3f} apart, beyond r_pair")
        if len(inside) < 2:
            return
        pts = np.array([st.pos[q] for q in inside])
        d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
        close = np.argwhere(np.triu(d < self.a.r_safe - TOL, k=1))
        for j, k in close:
            u, v = inside[j], inside[k]
            if (u, v) in intended:
                continue
            kind = "interacts" if d[j, k] <= self.a.r_pair + TOL else "is within r_safe"
            self.report(i, "e", f"unintended pair {u},{v} {kind} ({d[j, k]:.3f})")

    def gate1q(self, i: int, op: ScheduleOp) -> None:
        gates = self._realize(i, op.gates, want_cz=False)
        c = self.circuit
        for g in gates:
            gate = c.gates[g]
            qubits = range(c.num_qubits) if gate.kind is GateKind.GLOBAL else gate.qubits
            if gate.kind is not GateKind.GLOBAL and tuple(op.qubits) != gate.qubits:
                self.report(i, "state", f"gate {g} acts on {gate.qubits}, op names {op.qubits}")
            storage = self.a.storage
            for q in qubits:
                for k in range(self.n):
                    atom = q * self.n + k
                    p = self.state.pos.get(atom)
                    if p is None or atom in self.state.in_aod or not storage.contains(p, TOL):
                        self.report(i, "state", f"single-qubit gate {g} on atom {atom} outside storage")
                        return


def validate(s: Schedule, c: Circuit, a: Architecture) -> list[Violation]:
    """Replay ``s`` and return every violation found (empty means valid)."""
    return _Replay(s, c, a).run()


def format_report(violations: list[Violation]) -> str:
    return "".join(f"{v}\n" for v in violations)
