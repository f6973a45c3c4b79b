"""Parallel vs serial routing on the synthetic families (directional Table I analogue).

Usage: python scripts/table1.py [--qubits 20] [--seed 0]
"""

import argparse

from zar.arch import default_architecture
from zar.generators import chain, ghz, parallel_layers, random_circuit
from zar.router import route_naive, route_nalac


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--qubits", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    n, seed = args.qubits, args.seed
    a = default_architecture()
    circuits = {
        f"ghz{n}": ghz(n),
        f"chain{n}": chain(n),
        f"layers{n}": parallel_layers(n, layers=5, seed=seed),
        f"random{n}": random_circuit(n, 10 * n, seed=seed),
    }
    print("circuit\tcz\tnaive_ms\tnalac_ms\tratio\tavg_parallel_cz")
    for name, c in circuits.items():
        _, slow = route_naive(c, a)
        _, fast = route_nalac(c, a)
        print(
            f"{name}\t{c.cz_count}\t{slow.routing_overhead / 1000:.2f}\t{fast.routing_overhead / 1000:.2f}"
            f"\t{fast.routing_overhead / slow.routing_overhead:.3f}\t{fast.avg_parallel_cz:.2f}"
        )


if __name__ == "__main__":
    main()
