"""Zoned architecture: zone geometry, timing constants, logical-array grids.

Units are fixed: micrometers for lengths, microseconds for durations.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field, replace
from enum import Enum

Point = tuple[float, float]


class ZoneKind(Enum):
    STORAGE = "storage"
    ENTANGLING = "entangling"
    READOUT = "readout"


class ArchitectureError(ValueError):
    pass


@dataclass(frozen=True)
class ZoneSpec:
    kind: ZoneKind
    origin: Point
    width: float
    height: float
    pitch_x: float
    pitch_y: float

    def contains(self, p: Point, eps: float = 1e-9) -> bool:
        x, y = p
        ox, oy = self.origin
        return ox - eps <= x <= ox + self.width + eps and oy - eps <= y <= oy + self.height + eps

    def interiors_overlap(self, other: ZoneSpec) -> bool:
        ax, ay = self.origin
        bx, by = other.origin
        return (
            ax < bx + other.width
            and bx < ax + self.width
            and ay < by + other.height
            and by < ay + self.height
        )


@dataclass(frozen=True)
class Architecture:
    zones: tuple[ZoneSpec, ...]
    r_pair: float = 2.0
    r_safe: float = 4.0
    aod_min_sep: float = 1.0
    t_load: float = 20.0
    t_store: float = 20.0
    shuttle_speed: float = 0.55
    t_cz: float = 0.2
    array_rows: int = 1
    array_cols: int = 1
    intra_array_pitch: float = 5.0
    t_1q: float = 0.0

    def __post_init__(self) -> None:
        validate_architecture(self)

    def zone(self, kind: ZoneKind) -> ZoneSpec:
        for z in self.zones:
            if z.kind is kind:
                return z
        raise ArchitectureError(f"no {kind.value} zone")

    @property
    def storage(self) -> ZoneSpec:
        return self.zone(ZoneKind.STORAGE)

    @property
    def entangling(self) -> ZoneSpec:
        return self.zone(ZoneKind.ENTANGLING)

    @property
    def atoms_per_qubit(self) -> int:
        return self.array_rows * self.array_cols

    @property
    def footprint(self) -> Point:
        """Extent (x, y) spanned by one logical array, atom center to atom center."""
        return (
            (self.array_cols - 1) * self.intra_array_pitch,
            (self.array_rows - 1) * self.intra_array_pitch,
        )

    def with_array(self, rows: int, cols: int) -> Architecture:
        return replace(self, array_rows=rows, array_cols=cols)


def validate_architecture(a: Architecture) -> None:
    kinds = [z.kind for z in a.zones]
    for kind in (ZoneKind.STORAGE, ZoneKind.ENTANGLING):
        if kinds.count(kind) != 1:
            raise ArchitectureError(f"need exactly one {kind.value} zone, got {kinds.count(kind)}")
    if kinds.count(ZoneKind.READOUT) > 1:
        raise ArchitectureError("at most one readout zone")
    for z in a.zones:
        if z.pitch_x <= 0 or z.pitch_y <= 0:
            raise ArchitectureError(f"{z.kind.value}: trap pitch must be positive")
        if z.width < 0 or z.height < 0:
            raise ArchitectureError(f"{z.kind.value}: negative dimensions")
    for i, z in enumerate(a.zones):
        for other in a.zones[i + 1 :]:
            if z.interiors_overlap(other):
                raise ArchitectureError(f"zones {z.kind.value} and {other.kind.value} overlap")
    if not 0 < a.r_pair < a.r_safe:
        raise ArchitectureError("need 0 < r_pair < r_safe")
    for name in ("t_load", "t_store", "shuttle_speed", "t_cz", "aod_min_sep", "intra_array_pitch"):
        if getattr(a, name) <= 0:
            raise ArchitectureError(f"{name} must be positive")
    if a.t_1q < 0:
        raise ArchitectureError("t_1q must be non-negative")
    if a.array_rows < 1 or a.array_cols < 1:
        raise ArchitectureError("array dimensions must be >= 1")
    if a.atoms_per_qubit > 1:
        # atoms of one array must not interact with each other or with the
        # neighbouring atom of a partner array parked at the pairing offset
        if a.intra_array_pitch < a.r_safe + a.r_pair / 2:
            raise ArchitectureError("intra_array_pitch must be >= r_safe + r_pair/2")
        if a.intra_array_pitch < a.aod_min_sep:
            raise ArchitectureError("intra_array_pitch must be >= aod_min_sep")
    if a.r_pair / 2 + 1e-9 < a.aod_min_sep:
        raise ArchitectureError("pairing offset r_pair/2 must be >= aod_min_sep")
    if entangling_slot_pitch(a) < a.r_safe:
        raise ArchitectureError("entangling site pitch below r_safe")


# -- logical grid -------------------------------------------------------------


@dataclass(frozen=True)
class ZoneGrid:
    zone: ZoneSpec
    pitch_x: float
    pitch_y: float
    cols: int
    rows: int

    def site(self, row: int, col: int) -> Point:
        ox, oy = self.zone.origin
        return (ox + col * self.pitch_x, oy + row * self.pitch_y)

    @property
    def sites(self) -> list[Point]:
        return [self.site(r, c) for r in range(self.rows) for c in range(self.cols)]

    @property
    def capacity(self) -> int:
        return self.rows * self.cols


@dataclass(frozen=True)
class LogicalGrid:
    zones: dict[ZoneKind, ZoneGrid] = field(default_factory=dict)

    def __getitem__(self, kind: ZoneKind) -> ZoneGrid:
        return self.zones[kind]

    @property
    def storage(self) -> ZoneGrid:
        return self.zones[ZoneKind.STORAGE]


def logical_pitch(a: Architecture, z: ZoneSpec) -> Point:
    fx, fy = a.footprint
    return (max(z.pitch_x, fx + z.pitch_x), max(z.pitch_y, fy + z.pitch_y))


def _zone_grid(a: Architecture, z: ZoneSpec) -> ZoneGrid:
    fx, fy = a.footprint
    px, py = logical_pitch(a, z)
    eps = 1e-9
    if fx > z.width + eps or fy > z.height + eps:
        raise ArchitectureError(f"{z.kind.value} zone too small for one {a.array_rows}x{a.array_cols} array")
    cols = math.floor((z.width - fx) / px + eps) + 1
    rows = math.floor((z.height - fy) / py + eps) + 1
    return ZoneGrid(z, px, py, cols, rows)


def derive_logical_grid(a: Architecture) -> LogicalGrid:
    """One lattice of logical sites (upper-left atom positions) per zone."""
    return LogicalGrid({z.kind: _zone_grid(a, z) for z in a.zones})


def expand_logical_position(a: Architecture, p: Point) -> list[Point]:
    """Atom positions of the array anchored at ``p``, row-major."""
    x, y = p
    d = a.intra_array_pitch
    return [(x + j * d, y + i * d) for i in range(a.array_rows) for j in range(a.array_cols)]


# -- entangling zone pair slots -------------------------------------------------


def entangling_slot_pitch(a: Architecture) -> float:
    """x distance between adjacent pair slots.

    A parked pair occupies footprint_x + r_pair/2; the next slot's atoms must
    sit at least r_safe beyond that.
    """
    z = a.entangling
    px, _ = logical_pitch(a, z)
    return max(px, a.footprint[0] + a.r_safe + a.r_pair)


def pair_offset(a: Architecture) -> Point:
    return (a.r_pair / 2, 0.0)


@dataclass(frozen=True)
class EntanglingRow:
    """Single-row slot geometry in the entangling zone."""

    x0: float
    y: float
    pitch: float
    n_slots: int

    def x(self, slot: int) -> float:
        return self.x0 + slot * self.pitch


def entangling_row(a: Architecture) -> EntanglingRow:
    z = a.entangling
    pitch = entangling_slot_pitch(a)
    fx, fy = a.footprint
    usable = z.width - fx - a.r_pair / 2
    if usable < 0 or fy > z.height:
        raise ArchitectureError("entangling zone too small for one pair slot")
    n = math.floor(usable / pitch + 1e-9) + 1
    y = z.origin[1] + (z.height - fy) / 2
    return EntanglingRow(z.origin[0], y, pitch, n)


# -- config I/O -------------------------------------------------------------------

_SCALARS = (
    "r_pair",
    "r_safe",
    "aod_min_sep",
    "t_load",
    "t_store",
    "shuttle_speed",
    "t_cz",
    "array_rows",
    "array_cols",
    "intra_array_pitch",
    "t_1q",
)
_INT_SCALARS = {"array_rows", "array_cols"}


def parse_architecture(text: str) -> Architecture:
    """Parse an INI-style config.

    ``[architecture]`` holds scalars; each ``[zone.<name>]`` section holds
    ``kind, origin_x, origin_y, width, height, pitch_x, pitch_y``.
    """
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ArchitectureError(f"config syntax: {exc}") from None
    if not cp.has_section("architecture"):
        raise ArchitectureError("missing [architecture] section")
    sec = cp["architecture"]
    kwargs: dict[str, float | int] = {}
    try:
        for key in _SCALARS:
            if key in sec:
                kwargs[key] = int(sec[key]) if key in _INT_SCALARS else float(sec[key])
        unknown = set(sec) - set(_SCALARS)
        if unknown:
            raise ArchitectureError(f"unknown keys {sorted(unknown)}")
        zones = []
        for name in cp.sections():
            if not name.startswith("zone"):
                continue
            z = cp[name]
            zones.append(
                ZoneSpec(
                    kind=ZoneKind(z["kind"].strip().lower()),
                    origin=(float(z["origin_x"]), float(z["origin_y"])),
                    width=float(z["width"]),
                    height=float(z["height"]),
                    pitch_x=float(z["pitch_x"]),
                    pitch_y=float(z["pitch_y"]),
                )
            )
    except KeyError as exc:
        raise ArchitectureError(f"missing key {exc}") from None
    except ValueError as exc:
        if isinstance(exc, ArchitectureError):
            raise
        raise ArchitectureError(str(exc)) from None
    return Architecture(zones=tuple(zones), **kwargs)


def load_architecture(path: str) -> Architecture:
    with open(path, encoding="utf-8") as fh:
        return parse_architecture(fh.read())


def dump_architecture(a: Architecture) -> str:
    cp = configparser.ConfigParser()
    cp["architecture"] = {k: repr(getattr(a, k)) for k in _SCALARS}
    for i, z in enumerate(a.zones):
        cp[f"zone.{z.kind.value}.{i}"] = {
            "kind": z.kind.value,
            "origin_x": repr(z.origin[0]),
            "origin_y": repr(z.origin[1]),
            "width": repr(z.width),
            "height": repr(z.height),
            "pitch_x": repr(z.pitch_x),
            "pitch_y": repr(z.pitch_y),
        }
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def default_architecture(**overrides) -> Architecture:
    """Wide-storage layout: storage below, entangling zone above."""
    zones = (
        ZoneSpec(ZoneKind.STORAGE, (0.0, 0.0), 400.0, 100.0, 10.0, 10.0),
        ZoneSpec(ZoneKind.ENTANGLING, (0.0, 150.0), 600.0, 40.0, 10.0, 10.0),
    )
    return Architecture(zones=zones, **overrides)


def narrow_architecture(**overrides) -> Architecture:
    """Same storage capacity as the wide layout, folded into a narrower, taller zone."""
    zones = (
        ZoneSpec(ZoneKind.STORAGE, (150.0, -300.0), 100.0, 400.0, 10.0, 10.0),
        ZoneSpec(ZoneKind.ENTANGLING, (0.0, 150.0), 600.0, 40.0, 10.0, 10.0),
    )
    return Architecture(zones=zones, **overrides)
