from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from vertexcalc.scalars import (
    C,
    K,
    ONE,
    ZERO,
    ParseError,
    Scalar,
    as_scalar,
    parse_scalar,
    rat,
    render_scalar,
    scalar_add,
    scalar_eval,
    scalar_mul,
)

rationals = st.fractions(min_value=-(10**6), max_value=10**6, max_denominator=10**4)


@st.composite
def scalar_values(draw):
    n_terms = draw(st.integers(min_value=0, max_value=4))
    terms = {}
    for _ in range(n_terms):
        key = (draw(st.integers(0, 3)), draw(st.integers(0, 3)))
        terms[key] = rat(draw(rationals))
    return Scalar(terms)


class TestArithmetic:
    def test_add_rationals(self):
        assert scalar_add(as_scalar(rat(1, 2)), as_scalar(rat(1, 3))) == as_scalar(rat(5, 6))

    def test_add_identity(self):
        assert scalar_add(K, ZERO) == K

    def test_like_terms_collect(self):
        half_C = as_scalar(rat(1, 2)) * C
        assert scalar_add(half_C, half_C) == C

    def test_mul_rationals(self):
        assert scalar_mul(as_scalar(rat(2, 3)), as_scalar(rat(3, 4))) == as_scalar(rat(1, 2))

    def test_mul_symbols_degrees_add(self):
        product = scalar_mul(K, C)
        assert product.terms == {(1, 1): rat(1)}

    def test_mul_by_zero(self):
        assert scalar_mul(ZERO, K) == ZERO
        assert scalar_mul(ZERO, K).is_zero()

    def test_no_zero_terms_stored(self):
        assert (K - K).terms == {}
        assert Scalar({(2, 1): 0}).terms == {}

    def test_int_coercion(self):
        assert 2 * K - K == K
        assert K + 1 - 1 == K


class TestEval:
    def test_eval_symbol(self):
        assert scalar_eval(K, 1, 0) == 1

    def test_eval_half_C(self):
        assert scalar_eval(as_scalar(rat(1, 2)) * C, 1, 26) == 13

    def test_eval_constant(self):
        assert scalar_eval(as_scalar(rat(3, 7)), 5, 9) == rat(3, 7)

    @given(scalar_values(), scalar_values(), rationals, rationals)
    def test_eval_is_ring_homomorphism(self, a, b, kv, cv):
        kv, cv = rat(kv), rat(cv)
        assert scalar_eval(a * b, kv, cv) == scalar_eval(a, kv, cv) * scalar_eval(b, kv, cv)
        assert scalar_eval(a + b, kv, cv) == scalar_eval(a, kv, cv) + scalar_eval(b, kv, cv)


class TestRingAxioms:
    @given(scalar_values(), scalar_values())
    def test_commutativity(self, a, b):
        assert a + b == b + a
        assert a * b == b * a

    @given(scalar_values(), scalar_values(), scalar_values())
    def test_associativity(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)

    @given(scalar_values(), scalar_values(), scalar_values())
    def test_distributivity(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(scalar_values())
    def test_units(self, a):
        assert a + ZERO == a
        assert a * ONE == a
        assert a - a == ZERO

    @given(scalar_values(), scalar_values())
    def test_canonical_form_bit_for_bit(self, a, b):
        assert render_scalar(a + b) == render_scalar(b + a)


class TestTextForm:
    @pytest.mark.parametrize(
        "value,text",
        [
            (as_scalar(rat(3, 2)), "3/2"),
            (K, "K"),
            (as_scalar(rat(1, 2)) * C, "(1/2)*C"),
            (2 * K * C, "2*K*C"),
            (ZERO, "0"),
            (-K, "-K"),
            (K * K, "K^2"),
            (K + as_scalar(rat(1, 2)), "K + 1/2"),
            (K - 1, "K - 1"),
            (as_scalar(rat(-1, 3)) * C, "-(1/3)*C"),
        ],
    )
    def test_render(self, value, text):
        assert render_scalar(value) == text

    @pytest.mark.parametrize(
        "text,value",
        [
            ("3/2", as_scalar(rat(3, 2))),
            ("K", K),
            ("(1/2)*C", as_scalar(rat(1, 2)) * C),
            ("2*K*C", 2 * K * C),
            ("-K + 1/2", as_scalar(rat(1, 2)) - K),
            ("K^2*C - 4", K * K * C - 4),
            ("2 * K", 2 * K),
        ],
    )
    def test_parse(self, text, value):
        assert parse_scalar(text) == value

    @given(scalar_values())
    def test_round_trip(self, a):
        assert parse_scalar(render_scalar(a)) == a

    @pytest.mark.parametrize("bad", ["3//2", "K^", "Q", "1 +", "(1/2", "^2", ""])
    def test_parse_errors(self, bad):
        with pytest.raises(ParseError):
            parse_scalar(bad)

    def test_parse_error_position(self):
        with pytest.raises(ParseError) as info:
            parse_scalar("K + Q")
        assert info.value.position == 4


class TestCoercions:
    def test_rat_accepts_fraction_and_str(self):
        assert rat(Fraction(3, 2)) == rat("3/2") == rat(3, 2)

    def test_hash_consistency(self):
        assert hash(K + C - C) == hash(K)
        assert len({K, Scalar({(1, 0): 1})}) == 1
