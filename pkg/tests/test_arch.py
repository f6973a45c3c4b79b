import itertools
import math

import pytest
from hypothesis import given, strategies as st

from zar.arch import (
    Architecture,
    ArchitectureError,
    ZoneKind,
    ZoneSpec,
    default_architecture,
    derive_logical_grid,
    dump_architecture,
    entangling_row,
    expand_logical_position,
    narrow_architecture,
    pair_offset,
    parse_architecture,
)


def test_default_capacity():
    g = derive_logical_grid(default_architecture())
    assert (g.storage.cols, g.storage.rows) == (41, 11)
    assert g.storage.capacity == 451


def test_narrow_has_same_capacity():
    assert derive_logical_grid(narrow_architecture()).storage.capacity == 451


def test_overlapping_zones_rejected():
    zones = (
        ZoneSpec(ZoneKind.STORAGE, (0, 0), 100, 100, 10, 10),
        ZoneSpec(ZoneKind.ENTANGLING, (50, 50), 100, 40, 10, 10),
    )
    with pytest.raises(ArchitectureError):
        Architecture(zones)


@pytest.mark.parametrize(
    "overrides",
    [
        {"r_pair": 5.0, "r_safe": 4.0},
        {"t_load": 0.0},
        {"aod_min_sep": 1.5},
        {"array_rows": 2, "intra_array_pitch": 3.0},
        {"array_cols": 0},
    ],
)
def test_invalid_parameters(overrides):
    with pytest.raises(ArchitectureError):
        default_architecture(**overrides)


def test_missing_zone():
    with pytest.raises(ArchitectureError):
        Architecture((ZoneSpec(ZoneKind.STORAGE, (0, 0), 100, 100, 10, 10),))


def test_config_round_trip():
    a = default_architecture(array_rows=2, array_cols=3, t_1q=0.5)
    assert parse_architecture(dump_architecture(a)) == a


@pytest.mark.parametrize(
    "text",
    [
        "[zone.x]\nkind=storage\n",
        "[architecture]\nbogus = 1\n",
        "[architecture]\n[zone.s]\nkind = storage\norigin_x = 0\n",
        "[architecture]\nr_pair = two\n",
        "not an ini",
    ],
)
def test_config_errors(text):
    with pytest.raises(ArchitectureError):
        parse_architecture(text)


def enumerate_sites(a, zone):
    """Brute force: greedy lattice walk, keeping anchors whose whole array fits."""
    fx, fy = a.footprint
    px = max(zone.pitch_x, fx + zone.pitch_x)
    py = max(zone.pitch_y, fy + zone.pitch_y)
    ox, oy = zone.origin
    out = []
    for i in itertools.count():
        if oy + i * py + fy > oy + zone.height + 1e-9:
            break
        for j in itertools.count():
            if ox + j * px + fx > ox + zone.width + 1e-9:
                break
            out.append((ox + j * px, oy + i * py))
    return out


@given(
    rows=st.integers(1, 3),
    cols=st.integers(1, 3),
    width=st.integers(20, 120),
    height=st.integers(20, 80),
    pitch=st.sampled_from([3.0, 5.0, 10.0]),
)
def test_logical_grid_matches_enumeration(rows, cols, width, height, pitch):
    zones = (
        ZoneSpec(ZoneKind.STORAGE, (0.0, 0.0), float(width), float(height), pitch, pitch),
        ZoneSpec(ZoneKind.ENTANGLING, (0.0, 200.0), 600.0, 40.0, 10.0, 10.0),
    )
    try:
        a = Architecture(zones, array_rows=rows, array_cols=cols)
        grid = derive_logical_grid(a)
    except ArchitectureError:
        return
    sites = grid.storage.sites
    assert sorted(sites) == sorted(enumerate_sites(a, zones[0]))
    atoms = [p for s in sites for p in expand_logical_position(a, s)]
    # arrays never share or leave their zone, and keep at least one trap pitch apart
    assert len(set(atoms)) == len(atoms)
    assert all(zones[0].contains(p) for p in atoms)
    for (i, p), (j, q) in itertools.combinations(enumerate(atoms), 2):
        if i // a.atoms_per_qubit != j // a.atoms_per_qubit:
            assert math.dist(p, q) >= pitch - 1e-9


def test_expand_positions_row_major():
    a = default_architecture(array_rows=2, array_cols=2)
    assert expand_logical_position(a, (10.0, 20.0)) == [(10, 20), (15, 20), (10, 25), (15, 25)]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_entangling_slots_keep_neighbours_apart(k):
    a = default_architecture(array_rows=k, array_cols=k)
    row = entangling_row(a)
    dx, _ = pair_offset(a)
    assert row.n_slots >= 2
    # the partner of slot s and the SLM array at slot s+1
    right_partner_atom = row.x(0) + dx + a.footprint[0]
    assert row.x(1) - right_partner_atom >= a.r_safe
    last = expand_logical_position(a, (row.x(row.n_slots - 1) + dx, row.y))
    assert all(a.entangling.contains(p) for p in last)
