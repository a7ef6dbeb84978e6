import pytest
from hypothesis import given, settings, strategies as st

from vertexcalc.newton import (
    PolySequence,
    SequenceWindow,
    binomial,
    evaluate_poly_sequence,
    forward_difference,
    kernel_order,
    newton_coefficients,
    nth_forward_difference,
    window_from_poly,
)
from vertexcalc.scalars import K, Scalar, as_scalar, rat

small_rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)


def window(values, base=0):
    return SequenceWindow(base, tuple(values))


def squares(n_max):
    return window([n * n for n in range(n_max + 1)])


class TestBinomial:
    def test_classic(self):
        assert binomial(4, 2) == 6

    def test_negative_one_alternates(self):
        for k in range(6):
            assert binomial(-1, k) == (-1) ** k

    def test_negative_two(self):
        # falling factorial (-2)(-3)(-4)/3!
        assert binomial(-2, 3) == -4

    def test_negative_lower_index_rejected(self):
        with pytest.raises(ValueError):
            binomial(3, -1)

    @given(st.integers(-30, 30), st.integers(0, 10))
    def test_pascal_rule(self, n, i):
        assert binomial(n + 1, i + 1) == binomial(n, i) + binomial(n, i + 1)


class TestForwardDifference:
    def test_squares(self):
        assert forward_difference(squares(4)).values == tuple(
            as_scalar(v) for v in (1, 3, 5, 7)
        )

    def test_constant(self):
        assert forward_difference(window([7, 7, 7])).values == (Scalar(), Scalar())

    def test_linear_over_symbols(self):
        assert forward_difference(window([K, 2 * K])).values == (K,)

    def test_too_short(self):
        with pytest.raises(ValueError):
            forward_difference(window([1]))


class TestNthForwardDifference:
    def test_cube_of_squares_vanishes(self):
        result = nth_forward_difference(squares(5), 3)
        assert all(v.is_zero() for v in result.values)

    def test_order_zero_is_identity(self):
        w = window([1, 5, 2])
        assert nth_forward_difference(w, 0).values == w.values

    def test_powers_of_two(self):
        result = nth_forward_difference(window([1, 2, 4, 8, 16]), 2)
        assert result.values == tuple(as_scalar(v) for v in (1, 2, 4))

    def test_window_too_short(self):
        with pytest.raises(ValueError):
            nth_forward_difference(window([1, 2]), 2)

    @settings(max_examples=60)
    @given(st.lists(small_rationals, min_size=2, max_size=9), st.integers(0, 8))
    def test_alternating_sum_route_agrees(self, values, N):
        # nth_forward_difference asserts the two routes agree internally
        w = window([rat(v) for v in values])
        if N <= len(w) - 1:
            iterated = w
            for _ in range(N):
                iterated = forward_difference(iterated)
            assert nth_forward_difference(w, N).values == iterated.values


class TestNewtonCoefficients:
    def test_squares(self):
        p = newton_coefficients(squares(5))
        assert p.newton_coeffs == (Scalar(), as_scalar(1), as_scalar(2))

    def test_constant(self):
        p = newton_coefficients(window([1, 1, 1, 1]))
        assert p.newton_coeffs == (as_scalar(1),)

    def test_binomial_basis_sequence(self):
        values = [binomial(n, 3) for n in range(8)]
        p = newton_coefficients(window(values))
        assert p.newton_coeffs == (Scalar(), Scalar(), Scalar(), as_scalar(1))

    def test_rejects_non_polynomial_claim(self):
        with pytest.raises(ValueError, match="not polynomial of claimed order"):
            newton_coefficients(window([1, 2, 4, 8, 16, 32]), order=3)

    def test_rejects_nonzero_base(self):
        with pytest.raises(ValueError):
            newton_coefficients(window([1, 2], base=1))


class TestEvaluate:
    def test_backward_extrapolation_squares(self):
        p = PolySequence((0, 1, 2))
        assert evaluate_poly_sequence(p, -3) == as_scalar(9)

    def test_constant(self):
        p = PolySequence((1,))
        for n in (-5, 0, 17):
            assert evaluate_poly_sequence(p, n) == as_scalar(1)

    def test_binomial_basis(self):
        p = PolySequence((0, 0, 0, 1))
        assert evaluate_poly_sequence(p, 5) == as_scalar(10)

    def test_trailing_zeros_trimmed(self):
        assert PolySequence((1, 2, 0, 0)).newton_coeffs == (as_scalar(1), as_scalar(2))


class TestKernelOrder:
    def test_squares(self):
        assert kernel_order(squares(6)) == 3

    def test_constant(self):
        assert kernel_order(window([4, 4, 4])) == 1

    def test_geometric_has_no_kernel(self):
        assert kernel_order(window([2**n for n in range(8)])) is None

    def test_zero_window(self):
        assert kernel_order(window([0, 0, 0])) == 0


class TestRoundTripProperties:
    @settings(max_examples=100)
    @given(st.lists(small_rationals, min_size=1, max_size=6))
    def test_round_trip(self, coeffs):
        p = PolySequence(tuple(rat(c) for c in coeffs))
        degree = len(p.newton_coeffs)
        w = window_from_poly(p, 0, max(degree + 2, 2))
        assert newton_coefficients(w, order=degree) == p

    @settings(max_examples=60)
    @given(st.lists(small_rationals, min_size=1, max_size=5), st.integers(-15, 15))
    def test_kernel_membership_iff_newton_form_reproduces(self, coeffs, n):
        p = PolySequence(tuple(rat(c) for c in coeffs))
        length = len(p.newton_coeffs) + 3
        w = window_from_poly(p, 0, length)
        order = kernel_order(w)
        assert order is not None and order <= len(p.newton_coeffs)
        recovered = newton_coefficients(w, order=order)
        for j, value in enumerate(w.values):
            assert evaluate_poly_sequence(recovered, j) == value
        assert evaluate_poly_sequence(recovered, n) == evaluate_poly_sequence(p, n)

    @settings(max_examples=60)
    @given(st.lists(small_rationals, min_size=1, max_size=5), st.integers(-10, 10))
    def test_difference_commutes_with_evaluation(self, coeffs, n):
        # evaluating at n+1 minus at n equals evaluating the differenced window's form
        p = PolySequence(tuple(rat(c) for c in coeffs))
        w = window_from_poly(p, 0, len(p.newton_coeffs) + 3)
        dw = forward_difference(w)
        d_order = kernel_order(dw)
        assert d_order is not None
        dp = newton_coefficients(dw, order=d_order)
        lhs = evaluate_poly_sequence(p, n + 1) - evaluate_poly_sequence(p, n)
        assert lhs == evaluate_poly_sequence(dp, n)
