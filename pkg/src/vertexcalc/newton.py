"""Forward-difference calculus on sequence windows.

A doubly infinite sequence is only ever touched through two finite
representations: a window of consecutive values, and the Newton-coefficient
form R_i = (difference^i)_0 which represents alpha_n = sum_i binom(n, i) R_i
exactly for every integer n once the sequence is killed by some power of the
difference operator.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

from .scalars import Scalar, as_scalar, rat


@lru_cache(maxsize=None)
def binomial(n: int, i: int):
    """Generalized binomial n(n-1)...(n-i+1)/i! for any integer n, i >= 0."""
    if i < 0:
        raise ValueError(f"binomial lower index must be nonnegative, got {i}")
    numerator = 1
    for j in range(i):
        numerator *= n - j
    return rat(numerator, factorial(i))


@dataclass(frozen=True)
class SequenceWindow:
    """Values alpha_{base_index + j} for j = 0..len(values)-1."""

    base_index: int
    values: tuple

    def __post_init__(self):
        if len(self.values) < 1:
            raise ValueError("window must contain at least one value")
        object.__setattr__(self, "values", tuple(as_scalar(v) for v in self.values))

    def __len__(self):
        return len(self.values)

    def shifted_to_zero(self) -> "SequenceWindow":
        return SequenceWindow(0, self.values)


@dataclass(frozen=True)
class PolySequence:
    """Newton form: alpha_n = sum_i binom(n, i) * newton_coeffs[i], all n in Z."""

    newton_coeffs: tuple

    def __post_init__(self):
        coeffs = [as_scalar(c) for c in self.newton_coeffs]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        object.__setattr__(self, "newton_coeffs", tuple(coeffs))


def forward_difference(w: SequenceWindow) -> SequenceWindow:
    """One difference step: result[j] = w[j+1] - w[j]; window shrinks by one."""
    if len(w) < 2:
        raise ValueError("window too short for a forward difference")
    values = tuple(w.values[j + 1] - w.values[j] for j in range(len(w) - 1))
    return SequenceWindow(w.base_index, values)


def nth_forward_difference(w: SequenceWindow, N: int) -> SequenceWindow:
    """N-fold difference, cross-checked against the alternating binomial sum."""
    if N < 0:
        raise ValueError("difference order must be nonnegative")
    if len(w) < N + 1:
        raise ValueError(f"window of length {len(w)} too short for order {N}")
    iterated = w
    for _ in range(N):
        iterated = forward_difference(iterated)
    # independent route: sum_i (-1)^i binom(N,i) alpha_{n+N-i}
    direct = []
    for j in range(len(w) - N):
        total = Scalar()
        for i in range(N + 1):
            sign = -1 if i % 2 else 1
            total = total + binomial(N, i) * sign * w.values[j + N - i]
        direct.append(total)
    if tuple(direct) != iterated.values:
        raise AssertionError("iterated differences disagree with the alternating sum")
    return iterated


def kernel_order(w: SequenceWindow):
    """Smallest N with the N-th difference identically zero across the window.

    Returns None when no difference power vanishes over the visible range;
    the answer is only evidence about the window, never about the full
    sequence.
    """
    if len(w) < 2:
        raise ValueError("window too short to estimate a kernel order")
    current = w
    for N in range(len(w)):
        if all(v.is_zero() for v in current.values):
            return N
        if len(current) < 2:
            return None
        current = forward_difference(current)
    return None


def newton_coefficients(w: SequenceWindow, order: int | None = None) -> PolySequence:
    """Extract [R_0, ..., R_{N-1}] with R_i the i-th difference at index 0.

    The window must be based at index 0 and must actually lie in the kernel
    of the N-th difference over its visible range (N = `order` when given,
    otherwise the smallest order the window exhibits).
    """
    if w.base_index != 0:
        raise ValueError("shift the window to base_index 0 first")
    if order is None:
        order = kernel_order(w)
        if order is None:
            raise ValueError("not polynomial of claimed order: no kernel within window")
    if order > len(w) - 1:
        raise ValueError("window too short for the claimed order")
    coeffs = []
    current = w
    for _ in range(order):
        coeffs.append(current.values[0])
        current = forward_difference(current)
    if not all(v.is_zero() for v in current.values):
        raise ValueError("not polynomial of claimed order")
    return PolySequence(tuple(coeffs))


def evaluate_poly_sequence(p: PolySequence, n: int) -> Scalar:
    """Exact value at any integer n, including backward extrapolation."""
    total = Scalar()
    for i, coeff in enumerate(p.newton_coeffs):
        total = total + binomial(n, i) * coeff
    return total


def window_from_poly(p: PolySequence, base_index: int, length: int) -> SequenceWindow:
    values = tuple(evaluate_poly_sequence(p, base_index + j) for j in range(length))
    return SequenceWindow(base_index, values)
