import math

from hypothesis import given

from conftest import CYCLE4_EDGES, WORKED_EDGES
from test_gate_graph import graphs
from zar.arch import default_architecture, entangling_row
from zar.gate_graph import color_edges, graph_from_edges, max_independent_set
from zar.placement import insert_resting_slots, order_slm_qubits, plan_steps


def _plan(edges, a=None):
    g = graph_from_edges(edges)
    p = max_independent_set(g)
    col = color_edges(g, p)
    return g, p, col, plan_steps(col, p, a or default_architecture())


def test_worked_slm_order():
    g = graph_from_edges(WORKED_EDGES)
    p = max_independent_set(g)
    assert order_slm_qubits(color_edges(g, p), p) == [5, 6, 2, 4]


def test_worked_single_resting_slot_reused():
    _, p, col, plan = _plan(WORKED_EDGES)
    assert plan.layout.slots == (5, None, 6, 2, 4)
    assert plan.layout.resting_slots == [1]
    users = [(t, q) for t, uses in enumerate(plan.rest_uses, start=1) for q in uses]
    assert users == [(3, 1), (4, 3)]
    assert plan.num_steps == 5
    assert insert_resting_slots([5, 6, 2, 4], col, p).slots == plan.layout.slots


def test_worked_step_positions():
    a = default_architecture()
    _, _, _, plan = _plan(WORKED_EDGES, a)
    # step 1: q7 pairs with q5 and sits r_pair/2 to its right
    x5, y = plan.slm_positions[5]
    assert plan.positions[0][7] == (x5 + a.r_pair / 2, y)


def test_cycle_has_no_resting_slot():
    _, _, col, plan = _plan(CYCLE4_EDGES)
    assert col.num_colors == 3
    assert plan.layout.resting_slots == []


@given(graphs(max_nodes=12, max_edges=20))
def test_step_geometry(g):
    a = default_architecture()
    p = max_independent_set(g)
    col = color_edges(g, p)
    plan = plan_steps(col, p, a)
    row = entangling_row(a)
    slm = plan.slm_positions
    prev = {}
    for t, pos in enumerate(plan.positions, start=1):
        xs = [pos[q][0] for q in plan.aod_order]
        assert all(b - x >= row.pitch - 1e-9 for x, b in zip(xs, xs[1:]))
        partners = {p.blue_of(e): p.slm_of(e) for e in col.edges_of_color(t)}
        for q, (x, y) in pos.items():
            if q in partners:
                assert math.isclose(math.dist((x, y), slm[partners[q]]), a.r_pair / 2)
            else:
                assert min(math.dist((x, y), s) for s in slm.values()) >= a.r_safe
            assert x >= prev.get(q, -math.inf)
            prev[q] = x
