"""Wide versus narrow storage zone with equal capacity."""

import argparse

from zar.arch import default_architecture, narrow_architecture
from zar.generators import ghz, parallel_layers, random_circuit
from zar.router import route_nalac


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=5)
    args = ap.parse_args()
    archs = {"wide": default_architecture(), "narrow": narrow_architecture()}
    circuits = {"ghz20": ghz(20)}
    for seed in range(args.seeds):
        circuits[f"layers20_s{seed}"] = parallel_layers(20, 3, seed)
        circuits[f"random30_s{seed}"] = random_circuit(30, 200, seed)
    print("circuit\tstorage\tload_store_time\tshuttle_time")
    for name, c in circuits.items():
        for label, a in archs.items():
            _, st = route_nalac(c, a)
            print(f"{name}\t{label}\t{st.load_store_time:.1f}\t{st.shuttle_time:.1f}")


if __name__ == "__main__":
    main()
