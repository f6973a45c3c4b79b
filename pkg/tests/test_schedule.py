import pytest
from hypothesis import given, strategies as st

from zar.arch import default_architecture
from zar.generators import random_circuit
from zar.router import compile_circuit
from zar.schedule import (
    OpKind,
    Schedule,
    ScheduleFormatError,
    ScheduleOp,
    apply_timing,
    format_op,
    format_schedule,
    parse_schedule,
    stats_of,
)


def test_move_110um_costs_200us(arch):
    op = ScheduleOp(OpKind.MOVE, (0,), ((0.0, 0.0),), ((110.0, 0.0),))
    s, stats = apply_timing(Schedule([op]), arch)
    assert s.ops[0].duration == pytest.approx(200.0, abs=1e-9)
    assert stats.shuttle_time == pytest.approx(200.0)


def test_batch_costs(arch):
    ops = [
        ScheduleOp(OpKind.LOAD, (0, 1), ((0.0, 0.0), (10.0, 0.0))),
        ScheduleOp(OpKind.MOVE, (0, 1), ((0.0, 0.0), (10.0, 0.0)), ((3.0, 4.0), (10.0, 11.0))),
        ScheduleOp(OpKind.RYDBERG, gates=(0,)),
        ScheduleOp(OpKind.STORE, (0, 1), ((3.0, 4.0), (10.0, 11.0))),
    ]
    s, stats = apply_timing(Schedule(ops), arch)
    assert [op.duration for op in s.ops] == pytest.approx([20.0, 11 / 0.55, 0.2, 20.0])
    assert [op.start for op in s.ops] == pytest.approx([0.0, 20.0, 40.0, 40.2])
    assert s.duration == pytest.approx(sum(op.duration for op in s.ops))
    assert stats.load_store_time == 40.0
    assert stats.routing_overhead == stats.load_store_time + stats.shuttle_time


def test_op_format():
    op = ScheduleOp(OpKind.MOVE, (3,), ((1.0, 2.0),), ((4.5, -0.0001),), start=1.23456, duration=2.0)
    assert format_op(op) == "t=1.235 dur=2.000 MOVE q3:(1.000,2.000)->(4.500,0.000)"
    assert format_op(ScheduleOp(OpKind.RYDBERG, gates=(2, 5))) == "t=0.000 dur=0.000 RYDBERG g2 g5"
    assert format_op(ScheduleOp(OpKind.GATE1Q, gates=(1,), label="ry")) == "t=0.000 dur=0.000 GATE1Q g1:ry all"


@given(st.integers(2, 12), st.integers(0, 60), st.integers(0, 10_000), st.sampled_from(["nalac", "naive"]))
def test_text_round_trip(n, gates, seed, strategy):
    a = default_architecture()
    s, stats = compile_circuit(random_circuit(n, gates, seed), a, strategy)
    text = format_schedule(s)
    back = parse_schedule(text)
    assert format_schedule(back) == text
    assert back.atoms_per_qubit == 1 and back.strategy == strategy
    again = stats_of(back)
    assert again.rydberg_count == stats.rydberg_count
    assert again.load_store_time == pytest.approx(stats.load_store_time)
    assert again.shuttle_time == pytest.approx(stats.shuttle_time, abs=1e-3 * len(s.ops))


@pytest.mark.parametrize("line", ["t=0 dur=1 JUMP q1:(0,0)", "t=0 dur=1 LOAD q1:(0;0)", "garbage"])
def test_parse_errors(line):
    with pytest.raises(ScheduleFormatError):
        parse_schedule(line + "\n")


def test_stats_lines():
    s, stats = apply_timing(Schedule([ScheduleOp(OpKind.RYDBERG, gates=(0, 1))]), default_architecture())
    lines = dict(line.split("=") for line in stats.to_lines().splitlines())
    assert lines["rydberg_count"] == "1" and lines["avg_parallel_cz"] == "2.000"
