"""Run the three-index bracket identity over a full grid for one algebra,
one generator pair at a time, with per-pair timing.

Usage: python3 scripts/bflm_grid.py --algebra affine --weight 4
"""

import argparse
import itertools

from vertexcalc.fields import creative_state
from vertexcalc.liealg import algebra_by_name, render_state
from vertexcalc.vertex import VerificationGrid, VertexAlgebraHandle, verify_bflm


def parse_range(text):
    lo, _, hi = text.partition("..")
    return (int(lo), int(hi))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--algebra", default="heisenberg",
                        choices=("heisenberg", "virasoro", "affine"))
    parser.add_argument("--lrange", type=parse_range, default=(-3, 3))
    parser.add_argument("--mrange", type=parse_range, default=(-3, 3))
    parser.add_argument("--nrange", type=parse_range, default=(-3, 3))
    parser.add_argument("--weight", type=int, default=6)
    args = parser.parse_args()

    spec = algebra_by_name(args.algebra)
    handle = VertexAlgebraHandle(spec)
    grid = VerificationGrid(args.lrange, args.mrange, args.nrange, args.weight)
    names = sorted(handle.generators)
    states = {name: creative_state(spec, handle.generators[name])
              for name in names}

    total_cells, total_failures, total_elapsed = 0, 0, 0.0
    for left, right in itertools.product(names, names):
        report = verify_bflm(handle, states[left], states[right], grid)
        total_cells += report.cells_checked
        total_failures += len(report.failures)
        total_elapsed += report.elapsed
        status = "ok" if report.ok else f"FAILED {report.failures[0]}"
        print(f"{left} = {render_state(states[left])}, "
              f"{right} = {render_state(states[right])}: "
              f"{report.cells_checked} cells, {status} [{report.elapsed:.1f}s]")
    print(f"\ntotal: {total_cells} cells, {total_failures} failures, "
          f"{total_elapsed:.1f}s")


if __name__ == "__main__":
    main()
