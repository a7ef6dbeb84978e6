"""Walk every generator pair of the shipped algebras and print the locality
order plus the singular OPE expansion.

Usage: python3 scripts/ope_tour.py [--weight N]
"""

import argparse
import itertools
import time

from vertexcalc.cli import RunConfig, cmd_ope
from vertexcalc.fields import generator_fields
from vertexcalc.liealg import algebra_by_name


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--weight", type=int, default=4,
                        help="basis weight cutoff for the locality search")
    args = parser.parse_args()

    for algebra in ("heisenberg", "virasoro", "affine"):
        spec = algebra_by_name(algebra)
        names = sorted(generator_fields(spec))
        print(f"== {spec.describe()} ==")
        config = RunConfig(algebra=algebra, weight_cutoff=args.weight)
        for left, right in itertools.product(names, names):
            start = time.perf_counter()
            _, payload, text = cmd_ope(config, left, right)
            elapsed = time.perf_counter() - start
            expansion = text.splitlines()[1]
            print(f"  order {payload['order']}:  {expansion}"
                  f"   [{elapsed:.2f}s]")
        print()


if __name__ == "__main__":
    main()
