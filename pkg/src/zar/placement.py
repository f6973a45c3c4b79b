"""Entangling-zone positions for one run: SLM slot order, resting slots, AOD steps.

Slots are columns of the single entangling row. Positions are first computed
as slot indices; left/right parking lanes outside the layout hold AOD qubits
that are idle before their first or after their last interaction.
"""

from __future__ import annotations

from dataclasses import dataclass

from zar.arch import Architecture, EntanglingRow, Point, entangling_row, pair_offset
from zar.gate_graph import EdgeColoring, Partition, topological_order


class PlacementError(RuntimeError):
    """Internal invariant breach: a coloring that should be placeable is not."""


def order_slm_qubits(coloring: EdgeColoring, p: Partition) -> list[int]:
    """SLM qubits left to right: a topological order of the precedence relation."""
    return topological_order(coloring.slm_nodes(p), coloring.induced_order)


class _Slot:
    __slots__ = ("qubit",)

    def __init__(self, qubit: int | None):
        self.qubit = qubit  # None marks a resting slot

    def __repr__(self) -> str:
        return f"_Slot({self.qubit})"


@dataclass(frozen=True)
class SlmLayout:
    """Slots left to right; ``None`` entries are resting slots."""

    slots: tuple[int | None, ...]
    left_parking: int
    right_parking: int

    @property
    def resting_slots(self) -> list[int]:
        return [i for i, q in enumerate(self.slots) if q is None]

    @property
    def slm_order(self) -> list[int]:
        return [q for q in self.slots if q is not None]

    @property
    def width(self) -> int:
        return len(self.slots)

    @property
    def span(self) -> int:
        """Total slot columns including parking lanes."""
        return self.left_parking + len(self.slots) + self.right_parking

    def slot_of(self, q: int) -> int:
        return self.slots.index(q)


@dataclass(frozen=True)
class _Interleaving:
    layout: SlmLayout
    steps: list[dict[int, int]]  # per step: aod qubit -> slot index (layout indexing)
    rest_uses: list[dict[int, int]]  # per step: aod qubit -> resting slot index (if resting)


def _interleave(order: list[int], coloring: EdgeColoring, p: Partition) -> _Interleaving:
    slots = [_Slot(q) for q in order]
    slot_of_q = {q: s for q, s in zip(order, slots)}
    aod = coloring.aod_order
    m = len(aod)
    T = coloring.num_colors
    busy: list[dict[int, int]] = [dict() for _ in range(T + 1)]
    for e, c in coloring.color.items():
        busy[c][p.blue_of(e)] = p.slm_of(e)

    # positions are slot objects (layout) or ("L", k) / ("R", k) parking lanes
    pos: list[dict[int, object]] = []
    prev: dict[int, object] = {a: ("L", m - i) for i, a in enumerate(aod)}

    def index(x: object) -> int:
        if isinstance(x, _Slot):
            return slots.index(x)
        side, k = x  # type: ignore[misc]
        return -k if side == "L" else len(slots) + k

    def next_busy(a: int, t: int) -> int | None:
        for u in range(t + 1, T + 1):
            if a in busy[u]:
                return u
        return None

    for t in range(1, T + 1):
        cur: dict[int, object] = {}
        for i, a in enumerate(aod):
            if a in busy[t]:
                cur[a] = slot_of_q[busy[t][a]]
                continue
            lb = index(prev[a])
            if i > 0:
                lb = max(lb, index(cur[aod[i - 1]]) + 1)
            ub = None  # exclusive
            for b in aod[i + 1 :]:
                if b in busy[t]:
                    ub = index(slot_of_q[busy[t][b]])
                    break
            nb = next_busy(a, t)
            if nb is not None:
                s_next = index(slot_of_q[busy[nb][a]])
                ub = s_next if ub is None else min(ub, s_next)
            cur[a] = _free_slot(slots, lb, ub, index, index(prev[a]))
        pos.append(cur)
        prev = cur

    lo = min((index(x) for step in pos for x in step.values()), default=0)
    hi = max((index(x) for step in pos for x in step.values()), default=-1)
    left = max(0, -lo)
    right = max(0, hi - (len(slots) - 1))
    layout = SlmLayout(tuple(s.qubit for s in slots), left, right)
    steps = [{a: index(x) for a, x in step.items()} for step in pos]
    rest_uses = [
        {a: index(x) for a, x in step.items() if isinstance(x, _Slot) and x.qubit is None}
        for step in pos
    ]
    return _Interleaving(layout, steps, rest_uses)


def _free_slot(slots: list[_Slot], lb: int, ub: int | None, index, prev: int) -> object:
    """Leftmost non-SLM slot with index >= lb and < ub; inserts a resting slot if none.

    ``prev`` is the qubit's previous index; a new slot goes right of it.
    """
    n = len(slots)
    if lb < 0:
        cand: object = ("L", -lb)
    else:
        cand = None
        for k in range(lb, n):
            if slots[k].qubit is None:
                cand = slots[k]
                break
        if cand is None:
            cand = ("R", max(lb, n) - n)
    if ub is None or index(cand) < ub:
        return cand
    at = lb + 1 if lb == prev and lb >= 0 else max(lb, 0)
    if ub is not None and at > ub:
        raise PlacementError(f"no room for idle AOD qubit between slots {lb} and {ub}")
    slot = _Slot(None)
    slots.insert(at, slot)
    return slot


def insert_resting_slots(order: list[int], coloring: EdgeColoring, p: Partition) -> SlmLayout:
    return _interleave(order, coloring, p).layout


@dataclass(frozen=True)
class StepPlan:
    layout: SlmLayout
    aod_order: list[int]
    slot_index: list[dict[int, int]]  # step -> aod qubit -> layout slot index
    positions: list[dict[int, Point]]  # step -> aod qubit -> anchor position
    slm_positions: dict[int, Point]
    rest_uses: list[dict[int, int]]

    @property
    def num_steps(self) -> int:
        return len(self.positions)


def slot_x(row: EntanglingRow, layout: SlmLayout, idx: int) -> float:
    return row.x(idx + layout.left_parking)


def plan_steps(
    coloring: EdgeColoring, p: Partition, a: Architecture, order: list[int] | None = None
) -> StepPlan:
    """Concrete entangling-row coordinates for every step of one run."""
    if order is None:
        order = order_slm_qubits(coloring, p)
    il = _interleave(order, coloring, p)
    row = entangling_row(a)
    dx, dy = pair_offset(a)
    layout = il.layout
    slm_pos = {q: (slot_x(row, layout, i), row.y) for i, q in enumerate(layout.slots) if q is not None}
    positions = [
        {q: (slot_x(row, layout, k) + dx, row.y + dy) for q, k in step.items()} for step in il.steps
    ]
    plan = StepPlan(layout, coloring.aod_order, il.steps, positions, slm_pos, il.rest_uses)
    _check_plan(plan, coloring, p)
    return plan


def _check_plan(plan: StepPlan, coloring: EdgeColoring, p: Partition) -> None:
    slots = plan.layout.slots
    prev: dict[int, int] = {}
    for t, step in enumerate(plan.slot_index, start=1):
        ks = [step[q] for q in plan.aod_order]
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise PlacementError(f"AOD order broken at step {t}")
        busy = {p.blue_of(e): p.slm_of(e) for e in coloring.edges_of_color(t)}
        for q, k in step.items():
            if q in busy:
                if not (0 <= k < len(slots)) or slots[k] != busy[q]:
                    raise PlacementError(f"AOD qubit {q} misses its partner at step {t}")
            elif 0 <= k < len(slots) and slots[k] is not None:
                raise PlacementError(f"idle AOD qubit {q} parked on an SLM slot at step {t}")
            if q in prev and k < prev[q]:
                raise PlacementError(f"AOD qubit {q} moves left at step {t}")
        prev = step
