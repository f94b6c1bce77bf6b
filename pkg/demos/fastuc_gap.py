"""Fast continuous UC against the binary oracle on random instances.

    python3 demos/fastuc_gap.py [--instances 10] [--units 3] [--hours 12]

For each instance the fast LP and the oracle MIP are solved on the same fixed
capacities; the fast objective is a lower bound, so every gap is >= 0.
"""

import argparse

from cavernplan.engine import random_uc_instance, verify_fast_uc


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--instances", type=int, default=10)
    ap.add_argument("--units", type=int, default=3)
    ap.add_argument("--hours", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    instances = [random_uc_instance(args.seed + k, args.units, args.hours) for k in range(args.instances)]
    table = verify_fast_uc(instances)
    print(f"{'instance':24} {'fast':>12} {'oracle':>12} {'gap':>9} {'fast s':>7} {'mip s':>7}")
    for r in table.rows:
        print(f"{r.instance:24} {r.fast_objective:12.2f} {r.oracle_objective:12.2f} {r.gap:9.2e} "
              f"{r.fast_time:7.3f} {r.oracle_time:7.3f}")
    print(f"median gap {table.median_gap:.3e}, max gap {table.max_gap:.3e}")


if __name__ == "__main__":
    main()
