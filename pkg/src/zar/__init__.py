"""Routing logical-qubit arrays on zoned neutral-atom hardware."""

from zar.arch import Architecture, default_architecture, load_architecture, narrow_architecture
from zar.circuit import Circuit, parse_circuit
from zar.router import compile_circuit, expand_to_physical, route_naive, route_nalac
from zar.schedule import RoutingStats, Schedule, format_schedule, parse_schedule
from zar.validator import Violation, validate

__all__ = [
    "Architecture",
    "Circuit",
    "RoutingStats",
    "Schedule",
    "Violation",
    "compile_circuit",
    "default_architecture",
    "expand_to_physical",
    "format_schedule",
    "load_architecture",
    "narrow_architecture",
    "parse_circuit",
    "parse_schedule",
    "route_naive",
    "route_nalac",
    "validate",
]
