"""Load/store and shuttle time versus logical array size (k x k atoms per qubit)."""

import argparse

from zar.arch import default_architecture
from zar.generators import parallel_layers, random_circuit
from zar.router import route_nalac


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="1,2,3")
    ap.add_argument("--seeds", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(k) for k in args.sizes.split(",")]
    print("circuit\tarray_size\tload_store_time\tshuttle_time\trouting_overhead")
    for seed in range(args.seeds):
        circuits = {f"random20_s{seed}": random_circuit(20, 200, seed), f"layers20_s{seed}": parallel_layers(20, 4, seed)}
        for name, c in circuits.items():
            for k in sizes:
                _, st = route_nalac(c, default_architecture(array_rows=k, array_cols=k))
                print(f"{name}\t{k}\t{st.load_store_time:.1f}\t{st.shuttle_time:.1f}\t{st.routing_overhead:.1f}")


if __name__ == "__main__":
    main()
