"""Command line: compile, validate, inspect, bench, gen.

Exit codes: 0 success, 1 input error, 2 validation failure, 3 internal error.
Set ZAR_LOG=debug|info|warning for log verbosity.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from pathlib import Path

from zar.arch import Architecture, ArchitectureError, default_architecture, load_architecture
from zar.circuit import Circuit, CircuitError, executable_front, parse_circuit
from zar.gate_graph import build_graph, color_edges, dump_coloring, max_independent_set
from zar.generators import FAMILIES, generate
from zar.placement import PlacementError, plan_steps
from zar.router import RoutingError, compile_circuit
from zar.schedule import ScheduleFormatError, format_schedule, parse_schedule
from zar.validator import format_report, validate

log = logging.getLogger("zar")

EXIT_OK, EXIT_INPUT, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3
BENCH_COLUMNS = (
    "circuit",
    "strategy",
    "array_size",
    "load_store_time",
    "shuttle_time",
    "routing_overhead",
    "avg_parallel_cz",
    "compile_time",
)


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _circuit(path: str) -> Circuit:
    return parse_circuit(_read(path))


def _arch(args: argparse.Namespace) -> Architecture:
    if args.arch:
        _read(args.arch)  # uniform error for missing files
        a = load_architecture(args.arch)
    else:
        a = default_architecture()
    rows = args.array_rows if args.array_rows is not None else a.array_rows
    cols = args.array_cols if args.array_cols is not None else a.array_cols
    return a.with_array(rows, cols) if (rows, cols) != (a.array_rows, a.array_cols) else a


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_compile(args: argparse.Namespace) -> int:
    c = _circuit(args.circuit)
    a = _arch(args)
    s, stats = compile_circuit(c, a, args.strategy)
    if args.check:
        violations = validate(s, c, a)
        if violations:
            sys.stderr.write("router produced an invalid schedule:\n" + format_report(violations[:20]))
            return EXIT_INTERNAL
    text = format_schedule(s)
    if args.out:
        _write(args.out, text)
        sys.stdout.write(stats.to_lines())
    else:
        sys.stdout.write(text)
        sys.stderr.write(stats.to_lines())
    if args.stats:
        _write(args.stats, stats.to_lines())
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    s = parse_schedule(_read(args.schedule))
    violations = validate(s, _circuit(args.circuit), _arch(args))
    sys.stdout.write(format_report(violations))
    return EXIT_INVALID if violations else EXIT_OK


def cmd_inspect(args: argparse.Namespace) -> int:
    """Summarize the circuit and show how its first CZ front would be colored."""
    c = _circuit(args.circuit)
    a = _arch(args)
    out = [f"qubits={c.num_qubits} gates={len(c.gates)} cz={c.cz_count}"]
    front = sorted(executable_front(c))
    cz_front = [i for i in front if c.gates[i].is_cz]
    out.append(f"front={front}")
    if cz_front:
        g = build_graph(c.gates[i] for i in cz_front)
        p = max_independent_set(g)
        coloring = color_edges(g, p)
        plan = plan_steps(coloring, p, a)
        out.append(f"aod={coloring.aod_order} slm={plan.layout.slm_order}")
        out.append(f"steps={coloring.num_colors} resting_slots={len(plan.layout.resting_slots)}")
        out.append("edges (u v color aod):")
        out.append(dump_coloring(g, p, coloring).rstrip("\n"))
    _write(args.out, "\n".join(out) + "\n")
    return EXIT_OK


def _bench_rows(paths: list[Path], a: Architecture, strategies: list[str], sizes: list[int]):
    for path in paths:
        try:
            c = parse_circuit(path.read_text(encoding="utf-8"))
        except (OSError, CircuitError) as exc:
            sys.stderr.write(f"{path.name}: {exc}\n")
            continue
        for k in sizes:
            try:
                arch = a.with_array(k, k)
            except ArchitectureError as exc:
                sys.stderr.write(f"{path.name}: array {k}x{k}: {exc}\n")
                continue
            for strategy in strategies:
                try:
                    _, st = compile_circuit(c, arch, strategy)
                except (RoutingError, ArchitectureError) as exc:
                    sys.stderr.write(f"{path.name} {strategy} {k}: {exc}\n")
                    continue
                yield {
                    "circuit": path.stem,
                    "strategy": strategy,
                    "array_size": k,
                    "load_store_time": f"{st.load_store_time:.3f}",
                    "shuttle_time": f"{st.shuttle_time:.3f}",
                    "routing_overhead": f"{st.routing_overhead:.3f}",
                    "avg_parallel_cz": f"{st.avg_parallel_cz:.3f}",
                    "compile_time": f"{st.compile_time:.4f}",
                }


def cmd_bench(args: argparse.Namespace) -> int:
    a = _arch(args)
    root = Path(args.circuit_dir)
    if not root.is_dir():
        raise InputError(f"not a directory: {root}")
    paths = sorted(p for p in root.iterdir() if p.is_file() and not p.name.startswith("."))
    strategies = [s for s in args.strategy.split(",") if s]
    sizes = [int(k) for k in args.array_sizes.split(",") if k]
    fh = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    try:
        w = csv.DictWriter(fh, BENCH_COLUMNS, delimiter="\t", lineterminator="\n")
        w.writeheader()
        for row in _bench_rows(paths, a, strategies, sizes):
            w.writerow(row)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    kwargs = {}
    if args.family == "parallel-layers":
        kwargs["layers"] = args.layers
    elif args.family == "random":
        kwargs["num_gates"] = args.gates
    c = generate(args.family, args.n, seed=args.seed, **kwargs)
    _write(args.out, f"# {args.family} n={args.n} seed={args.seed}\n" + c.to_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zar", description="Zoned neutral-atom router for logical-qubit arrays.")
    sub = ap.add_subparsers(dest="command", required=True)

    def arch_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--arch", help="architecture INI file (default: built-in wide layout)")
        p.add_argument("--array-rows", type=int, help="override atoms per logical qubit, rows")
        p.add_argument("--array-cols", type=int, help="override atoms per logical qubit, columns")

    p = sub.add_parser("compile", help="route a circuit and write its schedule")
    p.add_argument("--circuit", required=True)
    arch_flags(p)
    p.add_argument("--strategy", choices=("nalac", "naive"), default="nalac")
    p.add_argument("--out", help="schedule file (default: stdout, stats then go to stderr)")
    p.add_argument("--stats", help="also write stats key=value lines here")
    p.add_argument("--no-check", dest="check", action="store_false", help="skip self-validation")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("validate", help="replay a schedule and report violations")
    p.add_argument("schedule")
    p.add_argument("--circuit", required=True)
    arch_flags(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("inspect", help="show the first CZ front's partition and coloring")
    p.add_argument("--circuit", required=True)
    arch_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("bench", help="TSV of routing stats over a circuit directory")
    p.add_argument("circuit_dir")
    arch_flags(p)
    p.add_argument("--strategy", default="nalac,naive", help="comma-separated strategies")
    p.add_argument("--array-sizes", default="1", help="comma-separated k for k x k arrays")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="write a synthetic circuit")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--layers", type=int, default=3)
    p.add_argument("--gates", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return ap


def _setup_logging() -> None:
    level = os.environ.get("ZAR_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, CircuitError, ArchitectureError, RoutingError, ScheduleFormatError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (PlacementError, RuntimeError) as exc:
        log.exception("internal error")
        sys.stderr.write(f"internal error: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
