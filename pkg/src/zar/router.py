"""Schedule construction: the parallel run-based router and the serial baseline."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from typing import Sequence

from zar.arch import (
    Architecture,
    LogicalGrid,
    Point,
    derive_logical_grid,
    entangling_row,
    expand_logical_position,
    pair_offset,
)
from zar.circuit import Circuit, GateKind, executable_front, mark_executed
from zar.gate_graph import (
    Edge,
    EdgeColoring,
    InteractionGraph,
    Partition,
    build_graph,
    color_edges,
    make_partition,
    max_independent_set,
)
from zar.placement import StepPlan, plan_steps
from zar.schedule import OpKind, RoutingStats, Schedule, ScheduleOp, apply_timing

log = logging.getLogger(__name__)

Site = tuple[int, int]  # (row, col) of the storage logical grid


class RoutingError(ValueError):
    """The circuit cannot be routed on the architecture (input error)."""


# -- storage bookkeeping ------------------------------------------------------------


class StorageState:
    """Which storage sites hold which qubit.

    Rows are ranked by closeness to the entangling zone (rank 0 is nearest).
    Qubits without a position are assigned sites never touched before, so
    the lazily chosen initial layout stays collision free.
    """

    def __init__(self, grid: LogicalGrid, entangling_y: float):
        self.grid = grid.storage
        g = self.grid
        self.row_rank = sorted(range(g.rows), key=lambda r: (abs(g.site(r, 0)[1] - entangling_y), r))
        self.site_of: dict[int, Site] = {}
        self.occupant: dict[Site, int] = {}
        self.touched: set[Site] = set()
        self.initial: dict[int, Point] = {}
        self.unplaced_count = 0

    def pos(self, site: Site) -> Point:
        return self.grid.site(*site)

    def place(self, q: int, site: Site) -> None:
        if site in self.occupant:
            raise RuntimeError(f"site {site} already holds qubit {self.occupant[site]}")
        if q not in self.initial:
            if site in self.touched:
                raise RuntimeError(f"initial site {site} for qubit {q} was used before")
            self.initial[q] = self.pos(site)
            self.unplaced_count -= 1
        self.site_of[q] = site
        self.occupant[site] = q
        self.touched.add(site)

    def remove(self, q: int) -> Site:
        site = self.site_of.pop(q)
        del self.occupant[site]
        return site

    def is_placed(self, q: int) -> bool:
        return q in self.initial

    def free_cols(self, row: int, virgin: bool | None = None) -> list[int]:
        cols = []
        for c in range(self.grid.cols):
            s = (row, c)
            if s in self.occupant:
                continue
            if virgin is None or (s not in self.touched) == virgin:
                cols.append(c)
        return cols


# -- load planning --------------------------------------------------------------------


@dataclass
class LoadBatch:
    row: int
    qubits: list[int] = field(default_factory=list)
    cols: list[int] = field(default_factory=list)

    def insert_at(self, rank: dict[int, int], q: int) -> int:
        i = 0
        while i < len(self.qubits) and rank[self.qubits[i]] < rank[q]:
            i += 1
        return i


def plan_loads(
    qubits: Sequence[int], state: StorageState, targets: dict[int, Point] | None = None
) -> list[LoadBatch]:
    """Group qubits into single-row, order-preserving load batches.

    ``qubits`` is the left-to-right order needed in the entangling zone.
    Unplaced qubits take fresh storage sites that extend an existing batch
    where possible. Batches come out by descending maximum misplacement.
    """
    rank = {q: i for i, q in enumerate(qubits)}
    batches: list[LoadBatch] = []
    by_row: dict[int, list[LoadBatch]] = {}
    for q in qubits:
        if not state.is_placed(q):
            continue
        row, col = state.site_of[q]
        chains = by_row.setdefault(row, [])
        # best fit: the chain whose last column is the largest one left of col
        best = None
        for b in chains:
            if b.cols[-1] < col and (best is None or b.cols[-1] > best.cols[-1]):
                best = b
        if best is None:
            best = LoadBatch(row)
            chains.append(best)
            batches.append(best)
        best.qubits.append(q)
        best.cols.append(col)

    reserved: set[Site] = set()
    for q in qubits:
        if state.is_placed(q):
            continue
        placed = False
        for b in sorted(batches, key=lambda b: -len(b.qubits)):
            i = b.insert_at(rank, q)
            lo = b.cols[i - 1] if i > 0 else -1
            hi = b.cols[i] if i < len(b.cols) else state.grid.cols
            for c in state.free_cols(b.row, virgin=True):
                if lo < c < hi and (b.row, c) not in reserved:
                    b.qubits.insert(i, q)
                    b.cols.insert(i, c)
                    reserved.add((b.row, c))
                    placed = True
                    break
            if placed:
                break
        if placed:
            continue
        best_row, best_free = None, 0
        for r in state.row_rank:
            n = sum(1 for c in state.free_cols(r, virgin=True) if (r, c) not in reserved)
            if n > best_free:
                best_row, best_free = r, n
        if best_row is None:
            raise RoutingError("storage has no untouched site left for a new qubit")
        c = next(c for c in state.free_cols(best_row, virgin=True) if (best_row, c) not in reserved)
        b = LoadBatch(best_row, [q], [c])
        reserved.add((best_row, c))
        batches.append(b)

    for b in batches:
        for q, c in zip(b.qubits, b.cols):
            if not state.is_placed(q):
                state.place(q, (b.row, c))

    if targets:
        def misplacement(b: LoadBatch) -> float:
            return max(abs(state.pos((b.row, c))[0] - targets[q][0]) for q, c in zip(b.qubits, b.cols))

        batches.sort(key=misplacement, reverse=True)
    return batches


def plan_storeback(qubits: Sequence[int], state: StorageState) -> list[tuple[int, list[int], list[int]]]:
    """Fewest storage rows that fit ``qubits`` (given left to right); nearest rows on ties.

    Returns ``(row, qubits, cols)`` per row, qubits mapped to free columns
    left to right. Untouched sites still owed to unplaced qubits are held back.
    """
    n = len(qubits)
    if n == 0:
        return []
    budget = sum(len(state.free_cols(r, virgin=True)) for r in state.row_rank) - state.unplaced_count
    usable: dict[int, list[int]] = {}
    for r in state.row_rank:
        cols = state.free_cols(r, virgin=False)
        virgin = state.free_cols(r, virgin=True)
        take = min(len(virgin), max(budget, 0))
        budget -= take
        usable[r] = sorted(cols + virgin[:take])
    counts = {r: len(usable[r]) for r in state.row_rank}
    if sum(counts.values()) < n:
        raise RoutingError("storage full")
    k, acc = 0, 0
    for c in sorted(counts.values(), reverse=True):
        if acc >= n:
            break
        acc += c
        k += 1
    chosen: list[int] = []
    remaining = list(state.row_rank)
    need = n
    while k > 0:
        for r in list(remaining):
            rest = sorted((counts[x] for x in remaining if x != r), reverse=True)[: k - 1]
            if counts[r] + sum(rest) >= need:
                chosen.append(r)
                remaining.remove(r)
                need -= counts[r]
                k -= 1
                break
        if need <= 0:
            break
    out = []
    i = 0
    for r in chosen:
        take = min(counts[r], n - i)
        if take <= 0:
            break
        out.append((r, list(qubits[i : i + take]), usable[r][:take]))
        i += take
    return out


# -- run assembly ---------------------------------------------------------------------


@dataclass
class _Emitter:
    a: Architecture
    state: StorageState
    ops: list[ScheduleOp] = field(default_factory=list)
    where: dict[int, Point] = field(default_factory=dict)

    def load(self, qs: Sequence[int]) -> None:
        self.ops.append(ScheduleOp(OpKind.LOAD, tuple(qs), tuple(self.where[q] for q in qs)))

    def store(self, qs: Sequence[int]) -> None:
        self.ops.append(ScheduleOp(OpKind.STORE, tuple(qs), tuple(self.where[q] for q in qs)))

    def move(self, qs: Sequence[int], to: Sequence[Point]) -> None:
        pairs = [(q, t) for q, t in zip(qs, to) if self.where[q] != t]
        if not pairs:
            return
        self.ops.append(
            ScheduleOp(
                OpKind.MOVE,
                tuple(q for q, _ in pairs),
                tuple(self.where[q] for q, _ in pairs),
                tuple(t for _, t in pairs),
            )
        )
        for q, t in pairs:
            self.where[q] = t

    def gate1q(self, c: Circuit, idx: int) -> None:
        g = c.gates[idx]
        qs = () if g.kind is GateKind.GLOBAL else g.qubits
        self.ops.append(ScheduleOp(OpKind.GATE1Q, qs, gates=(idx,), label=g.label))

    def rydberg(self, gates: Sequence[int]) -> None:
        self.ops.append(ScheduleOp(OpKind.RYDBERG, gates=tuple(sorted(gates))))

    def bring_in(self, qubits: list[int], targets: dict[int, Point], keep_loaded: bool) -> None:
        """Shuttle qubits from storage to ``targets``; optionally leave them in the AOD."""
        batches = plan_loads(qubits, self.state, targets)
        for q in qubits:
            self.where.setdefault(q, self.state.pos(self.state.site_of[q]))
        staged = keep_loaded and len(batches) > 1
        for b in batches:
            self.load(b.qubits)
            for q in b.qubits:
                self.state.remove(q)
            self.move(b.qubits, [targets[q] for q in b.qubits])
            if not keep_loaded or staged:
                self.store(b.qubits)
        if staged:
            # a single AOD row holds the whole group for the steps
            self.load(sorted(qubits, key=lambda q: targets[q][0]))

    def send_back(self, qubits: list[int], loaded: bool) -> None:
        ordered = sorted(qubits, key=lambda q: self.where[q][0])
        plan = plan_storeback(ordered, self.state)
        if loaded and len(plan) > 1:
            self.store(ordered)
            loaded = False
        for row, qs, cols in plan:
            if not loaded:
                self.load(qs)
            dest = [self.state.pos((row, c)) for c in cols]
            self.move(qs, dest)
            self.store(qs)
            for q, c in zip(qs, cols):
                self.state.place(q, (row, c))


def _run_plan(
    g: InteractionGraph, p: Partition, a: Architecture
) -> tuple[InteractionGraph, Partition, EdgeColoring, StepPlan]:
    """Color and place; shrink the run until it fits the entangling row.

    Shrinking drops blue nodes from the end of the processing order (their
    removal leaves the earlier colors untouched); a lone blue node keeps a
    prefix of its edges by gate index. The largest fitting prefix is found
    by bisection.
    """
    capacity = entangling_row(a).n_slots

    def attempt(sub_g: InteractionGraph, sub_p: Partition):
        coloring = color_edges(sub_g, sub_p)
        plan = plan_steps(coloring, sub_p, a)
        return (sub_g, sub_p, coloring, plan) if plan.layout.span <= capacity else None

    full = attempt(g, p)
    if full is not None:
        return full
    blue = sorted(p.aod, key=lambda v: (-g.degree(v), v))

    def with_blue(k: int):
        keep = set(blue[:k])
        sub = g.subgraph(e for e in p.covered if p.blue_of(e) in keep)
        return attempt(sub, make_partition(sub, keep))

    best = _largest_fitting(len(blue) - 1, with_blue)
    if best is not None:
        return best
    v = blue[0]
    edges = sorted((e for e in p.covered if p.blue_of(e) == v), key=g.gate_of.__getitem__)

    def with_edges(k: int):
        sub = g.subgraph(edges[:k])
        return attempt(sub, make_partition(sub, {v}))

    best = _largest_fitting(len(edges), with_edges)
    if best is None:
        raise RoutingError("entangling zone too narrow for a single interaction")
    return best


def _largest_fitting(hi: int, attempt):
    """Result of ``attempt(k)`` for the largest k in 1..hi that fits, assuming monotonicity."""
    lo, found = 1, None
    while lo <= hi:
        mid = (lo + hi) // 2
        result = attempt(mid)
        if result is None:
            hi = mid - 1
        else:
            found, lo = result, mid + 1
    return found


def _check_capacity(c: Circuit, a: Architecture, grid: LogicalGrid) -> None:
    if c.num_qubits > grid.storage.capacity:
        raise RoutingError(f"circuit has {c.num_qubits} qubits, storage fits {grid.storage.capacity}")
    if entangling_row(a).n_slots < 1:
        raise RoutingError("entangling zone has no pair slot")


def route_nalac(c: Circuit, a: Architecture) -> tuple[Schedule, RoutingStats]:
    """Parallel router: runs of colored steps with batched, demand-driven shuttling."""
    t0 = time.perf_counter()
    c = c.reset()
    grid = derive_logical_grid(a)
    _check_capacity(c, a, grid)
    row = entangling_row(a)
    state = StorageState(grid, row.y)
    state.unplaced_count = c.num_qubits
    em = _Emitter(a, state)
    runs = 0
    while True:
        front = executable_front(c)
        if not front:
            break
        oneq = sorted(i for i in front if not c.gates[i].is_cz)
        if oneq:
            for i in oneq:
                em.gate1q(c, i)
            mark_executed(c, oneq)
            continue
        graph = build_graph(c.gates[i] for i in front)
        part = max_independent_set(graph)
        graph, part, coloring, plan = _run_plan(graph, part, a)
        runs += 1

        slm_targets = dict(plan.slm_positions)
        slm_qubits = plan.layout.slm_order
        em.bring_in(slm_qubits, slm_targets, keep_loaded=False)
        aod_qubits = plan.aod_order
        em.bring_in(aod_qubits, plan.positions[0], keep_loaded=True)
        for t in range(1, plan.num_steps + 1):
            gates = [graph.gate_of[e] for e in coloring.edges_of_color(t)]
            if not gates:
                continue
            em.move(aod_qubits, [plan.positions[t - 1][q] for q in aod_qubits])
            em.rydberg(gates)
            mark_executed(c, gates)
        em.send_back(aod_qubits, loaded=True)
        em.send_back(slm_qubits, loaded=False)
    idle = [q for q in range(c.num_qubits) if not state.is_placed(q)]
    for q in idle:
        r = max(state.row_rank, key=lambda r: len(state.free_cols(r, virgin=True)))
        state.place(q, (r, state.free_cols(r, virgin=True)[0]))
    log.info("nalac: %d runs, %d ops", runs, len(em.ops))
    sched = Schedule(em.ops, dict(state.initial), 1, "nalac")
    return apply_timing(sched, a, time.perf_counter() - t0)


def route_naive(c: Circuit, a: Architecture) -> tuple[Schedule, RoutingStats]:
    """One CZ at a time: park the lower qubit in the entangling zone, bring its partner."""
    t0 = time.perf_counter()
    c = c.reset()
    grid = derive_logical_grid(a)
    _check_capacity(c, a, grid)
    row = entangling_row(a)
    state = StorageState(grid, row.y)
    cols = grid.storage.cols
    for q in range(c.num_qubits):
        r = state.row_rank[q // cols]
        state.place(q, (r, q % cols))
    em = _Emitter(a, state)
    em.where = {q: state.pos(state.site_of[q]) for q in range(c.num_qubits)}
    dx, dy = pair_offset(a)
    slot = (row.x(0), row.y)
    partner = (slot[0] + dx, slot[1] + dy)
    while True:
        front = executable_front(c)
        if not front:
            break
        oneq = sorted(i for i in front if not c.gates[i].is_cz)
        if oneq:
            for i in oneq:
                em.gate1q(c, i)
            mark_executed(c, oneq)
            continue
        idx = min(front)
        qa, qb = sorted(c.gates[idx].qubits)
        home_a, home_b = em.where[qa], em.where[qb]
        em.load([qa])
        em.move([qa], [slot])
        em.store([qa])
        em.load([qb])
        em.move([qb], [partner])
        em.rydberg([idx])
        mark_executed(c, [idx])
        em.move([qb], [home_b])
        em.store([qb])
        em.load([qa])
        em.move([qa], [home_a])
        em.store([qa])
    sched = Schedule(em.ops, dict(state.initial), 1, "naive")
    return apply_timing(sched, a, time.perf_counter() - t0)


def route(c: Circuit, a: Architecture, strategy: str = "nalac") -> tuple[Schedule, RoutingStats]:
    if strategy == "nalac":
        return route_nalac(c, a)
    if strategy == "naive":
        return route_naive(c, a)
    raise ValueError(f"unknown strategy {strategy!r}")


def compile_circuit(c: Circuit, a: Architecture, strategy: str = "nalac") -> tuple[Schedule, RoutingStats]:
    """Route, then expand to physical atoms when qubits are arrays."""
    s, stats = route(c, a, strategy)
    if a.atoms_per_qubit > 1:
        s = expand_to_physical(s, a)
    return s, stats


# -- logical -> physical ---------------------------------------------------------------


def expand_to_physical(s: Schedule, a: Architecture) -> Schedule:
    """Replace every logical qubit by its atom array; atom id = q * atoms + i."""
    n = a.atoms_per_qubit
    if s.atoms_per_qubit != 1:
        raise ValueError("schedule is already physical")

    def atoms(q: int) -> range:
        return range(q * n, q * n + n)

    def expand(qs, ps):
        out_q, out_p = [], []
        for q, p in zip(qs, ps):
            out_q.extend(atoms(q))
            out_p.extend(expand_logical_position(a, p))
        return tuple(out_q), tuple(out_p)

    ops = []
    for op in s.ops:
        if op.kind in (OpKind.LOAD, OpKind.STORE):
            qs, ps = expand(op.qubits, op.positions)
            ops.append(replace(op, qubits=qs, positions=ps))
        elif op.kind is OpKind.MOVE:
            qs, ps = expand(op.qubits, op.positions)
            _, ts = expand(op.qubits, op.targets)
            ops.append(replace(op, qubits=qs, positions=ps, targets=ts))
        else:
            ops.append(op)
    init = {}
    for q, p in s.initial_positions.items():
        init.update(zip(atoms(q), expand_logical_position(a, p)))
    return Schedule(ops, init, n, s.strategy)
