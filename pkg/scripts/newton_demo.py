"""Forward-difference tables, Newton coefficients, and exact backward
extrapolation for a few sample sequences.

Usage: python3 scripts/newton_demo.py
"""

from vertexcalc.cli import RunConfig, cmd_newton, parse_range, parse_sequence
from vertexcalc.newton import newton_coefficients, window_from_poly

SAMPLES = [
    ("n^2", "0..7"),
    ("binom(n,3)", "0..7"),
    ("n^3 - 2*n + 1", "0..7"),
    ("2^n", "0..7"),
    ("1,1,1,1", "0..3"),
]


def main():
    config = RunConfig()
    for sequence, window in SAMPLES:
        _, payload, text = cmd_newton(config, sequence, window)
        print(text)
        order = payload["kernel_order"]
        if order is not None:
            # round-trip: the Newton form re-samples to the original window
            lo, hi = parse_range(window)
            w = parse_sequence(sequence, lo, hi).shifted_to_zero()
            poly = newton_coefficients(w, order)
            assert window_from_poly(poly, 0, len(w)) == w
            print("round-trip: exact")
        print()


if __name__ == "__main__":
    main()
