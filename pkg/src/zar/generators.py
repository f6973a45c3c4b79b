"""Deterministic synthetic circuit families."""

from __future__ import annotations

import random

from zar.circuit import Circuit, Gate, cz, global_gate, local

FAMILIES = ("ghz", "chain", "parallel-layers", "random")


def ghz(n: int) -> Circuit:
    """H on qubit 0, then per link H-CZ-H on the target: a strictly serial CZ chain."""
    gates: list[Gate] = []
    if n > 0:
        gates.append(local(0, 0, "h"))
    for i in range(n - 1):
        gates.append(local(len(gates), i + 1, "h"))
        gates.append(cz(len(gates), i, i + 1))
        gates.append(local(len(gates), i + 1, "h"))
    return Circuit(n, gates)


def chain(n: int) -> Circuit:
    """CZ(i, i+1) for every i, separated by a non-diagonal gate on i+1."""
    gates: list[Gate] = []
    for i in range(n - 1):
        gates.append(cz(len(gates), i, i + 1))
        gates.append(local(len(gates), i + 1, "h"))
    return Circuit(n, gates)


def parallel_layers(n: int, layers: int = 3, seed: int = 0) -> Circuit:
    """``layers`` rounds of n//2 disjoint CZs on a random matching, H on all qubits between rounds."""
    rng = random.Random(seed)
    gates: list[Gate] = []
    for layer in range(layers):
        if layer:
            for q in range(n):
                gates.append(local(len(gates), q, "h"))
        perm = list(range(n))
        rng.shuffle(perm)
        for k in range(n // 2):
            gates.append(cz(len(gates), perm[2 * k], perm[2 * k + 1]))
    return Circuit(n, gates)


_LOCAL_LABELS = ("h", "x", "rz", "t", "s", "sx")


def random_circuit(
    n: int, num_gates: int = 100, seed: int = 0, cz_fraction: float = 0.5, max_cz: int | None = None
) -> Circuit:
    """Seeded mix of CZs and single-qubit gates with the occasional global gate.

    With ``max_cz`` set, generation stops right after that many CZs.
    """
    rng = random.Random(seed)
    gates: list[Gate] = []
    n_cz = 0
    for _ in range(num_gates):
        if max_cz is not None and n_cz >= max_cz:
            break
        r = rng.random()
        if n >= 2 and r < cz_fraction:
            a, b = rng.sample(range(n), 2)
            gates.append(cz(len(gates), a, b))
            n_cz += 1
        elif r < 0.97 or n == 0:
            if n == 0:
                break
            gates.append(local(len(gates), rng.randrange(n), rng.choice(_LOCAL_LABELS)))
        else:
            gates.append(global_gate(len(gates), rng.choice(("ry", "rz"))))
    return Circuit(n, gates)


def generate(family: str, n: int, seed: int = 0, **kwargs) -> Circuit:
    if family == "ghz":
        return ghz(n)
    if family == "chain":
        return chain(n)
    if family == "parallel-layers":
        return parallel_layers(n, seed=seed, **kwargs)
    if family == "random":
        return random_circuit(n, seed=seed, **kwargs)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
