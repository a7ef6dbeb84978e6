"""Exact coefficient arithmetic: rationals extended by the central symbols K and C.

Every quantity the engine computes is a polynomial in the two commuting
symbols K and C with rational coefficients.  Pure rationals are the
degree-(0,0) case.  Arithmetic is exact; there is no floating point.
"""

from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq

Rational = mpq  # arbitrary-precision, auto-normalized, gcd-reduced


def rat(value=0, den=None) -> mpq:
    """Coerce ints, strings like '3/2', Fractions or mpq into an mpq."""
    if den is not None:
        return mpq(value, den)
    t = type(value)
    if t is mpq:
        return value
    if t is int:
        return mpq(value)
    # Fraction's metaclass makes this isinstance costly, so check it last
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


class Scalar:
    """Element of Q[K, C]: map from (degree in K, degree in C) to a rational.

    Instances are immutable; no zero coefficients are stored and the term
    order used for rendering and hashing is canonical, so equal values
    render bit-for-bit identically.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for key, coeff in terms.items():
                coeff = rat(coeff)
                if coeff != 0:
                    clean[key] = coeff
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------

    @classmethod
    def from_rational(cls, value) -> "Scalar":
        return cls({(0, 0): rat(value)})

    @classmethod
    def symbol_K(cls) -> "Scalar":
        return cls({(1, 0): rat(1)})

    @classmethod
    def symbol_C(cls) -> "Scalar":
        return cls({(0, 1): rat(1)})

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return not self.terms or set(self.terms) == {(0, 0)}

    def rational_value(self) -> mpq:
        """The value of a purely rational Scalar; error if K or C occur."""
        if not self.terms:
            return rat(0)
        if set(self.terms) != {(0, 0)}:
            raise ValueError(f"not a pure rational: {self}")
        return self.terms[(0, 0)]

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = as_scalar(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            acc = terms.get(key)
            if acc is None:
                terms[key] = coeff
            else:
                acc = acc + coeff
                if acc == 0:
                    del terms[key]
                else:
                    terms[key] = acc
        out = Scalar.__new__(Scalar)
        out.terms = terms
        out._hash = None
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Scalar.__new__(Scalar)
        out.terms = {key: -coeff for key, coeff in self.terms.items()}
        out._hash = None
        return out

    def __sub__(self, other):
        return self + (-as_scalar(other))

    def __rsub__(self, other):
        return as_scalar(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            # plain rational factor: scale coefficients, keys unchanged
            if type(other) is int or type(other) is mpq:
                if other == 1:
                    return self
                if other == 0 or not self.terms:
                    return ZERO
                out = Scalar.__new__(Scalar)
                out.terms = {key: q * other for key, q in self.terms.items()}
                out._hash = None
                return out
            other = as_scalar(other)
        if not self.terms or not other.terms:
            return ZERO
        a, b = self.terms, other.terms
        if len(a) == 1 and len(b) == 1:
            ((ka, ca), qa), = a.items()
            ((kb, cb), qb), = b.items()
            out = Scalar.__new__(Scalar)
            out.terms = {(ka + kb, ca + cb): qa * qb}
            out._hash = None
            return out
        terms = {}
        for (ka, ca), qa in a.items():
            for (kb, cb), qb in b.items():
                key = (ka + kb, ca + cb)
                acc = terms.get(key)
                terms[key] = qa * qb if acc is None else acc + qa * qb
        out = Scalar.__new__(Scalar)
        out.terms = {key: q for key, q in terms.items() if q != 0}
        out._hash = None
        return out

    __rmul__ = __mul__

    # -- comparison ---------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.terms == other.terms
        if type(other) is int or type(other) is mpq or isinstance(other, Fraction):
            terms = self.terms
            if not terms:
                return other == 0
            if len(terms) == 1:
                q = terms.get((0, 0))
                return q is not None and q == other
            return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self.terms.items())))
        return self._hash

    # -- rendering ----------------------------------------------------

    def __str__(self):
        return render_scalar(self)

    def __repr__(self):
        return f"Scalar({render_scalar(self)})"


ZERO = Scalar()
ONE = Scalar.from_rational(1)
K = Scalar.symbol_K()
C = Scalar.symbol_C()


def as_scalar(value) -> Scalar:
    if isinstance(value, Scalar):
        return value
    if value == 0:
        return ZERO
    if value == 1:
        return ONE
    out = Scalar.__new__(Scalar)
    out.terms = {(0, 0): rat(value)}
    out._hash = None
    return out


def scalar_add(a: Scalar, b: Scalar) -> Scalar:
    return as_scalar(a) + as_scalar(b)


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    return as_scalar(a) * as_scalar(b)


def scalar_eval(a: Scalar, K_val, C_val) -> mpq:
    """Substitute rational values for K and C; returns a plain rational."""
    K_val, C_val = rat(K_val), rat(C_val)
    total = rat(0)
    for (kdeg, cdeg), coeff in a.terms.items():
        total += coeff * K_val**kdeg * C_val**cdeg
    return total


# -- text form --------------------------------------------------------
#
# Grammar (also accepted by parse_scalar):
#   expr   := ['-'] term (('+'|'-') term)*
#   term   := factor ('*' factor)*
#   factor := atom ['^' uint]
#   atom   := rational | 'K' | 'C' | '(' expr ')'
# Examples: 3/2, K, (1/2)*C, 2*K*C, K^2 - 4.


def _term_key(key):
    kdeg, cdeg = key
    return (-(kdeg + cdeg), -kdeg, -cdeg)


def _render_monomial(kdeg: int, cdeg: int) -> str:
    parts = []
    if kdeg == 1:
        parts.append("K")
    elif kdeg > 1:
        parts.append(f"K^{kdeg}")
    if cdeg == 1:
        parts.append("C")
    elif cdeg > 1:
        parts.append(f"C^{cdeg}")
    return "*".join(parts)


def _render_term(kdeg: int, cdeg: int, coeff) -> str:
    # coeff is positive here; sign handling happens in render_scalar
    mono = _render_monomial(kdeg, cdeg)
    if not mono:
        return str(coeff)
    if coeff == 1:
        return mono
    if coeff.denominator == 1:
        return f"{coeff}*{mono}"
    return f"({coeff})*{mono}"


def render_scalar(a: Scalar) -> str:
    if not a.terms:
        return "0"
    pieces = []
    for key in sorted(a.terms, key=_term_key):
        kdeg, cdeg = key
        coeff = a.terms[key]
        if not pieces:
            body = _render_term(kdeg, cdeg, abs(coeff))
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(" - " if coeff < 0 else " + ")
            pieces.append(_render_term(kdeg, cdeg, abs(coeff)))
    return "".join(pieces)


class ParseError(ValueError):
    """Raised on malformed expression text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def tokenize(text: str, extra_symbols: str = ""):
    """Split into (kind, value, position) tokens shared by all the tiny grammars."""
    tokens = []
    i, n = 0, len(text)
    symbols = "+-*/^()[]:.," + extra_symbols
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
        elif ch in symbols:
            if ch == "." and i + 1 < n and text[i + 1] == ".":
                tokens.append(("..", "..", i))
                i += 2
            else:
                tokens.append((ch, ch, i))
                i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _ScalarParser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.pos += 1
        return tok

    def parse_expr(self) -> Scalar:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        total = self.parse_term() * sign
        while self.peek()[0] in "+-":
            op = self.take()[0]
            term = self.parse_term()
            total = total + (term if op == "+" else -term)
        return total

    def parse_term(self) -> Scalar:
        value = self.parse_factor()
        while self.peek()[0] == "*":
            self.take()
            value = value * self.parse_factor()
        return value

    def parse_factor(self) -> Scalar:
        base = self.parse_atom()
        if self.peek()[0] == "^":
            self.take()
            exp_tok = self.take("int")
            power = ONE
            for _ in range(int(exp_tok[1])):
                power = power * base
            return power
        return base

    def parse_atom(self) -> Scalar:
        kind, value, position = self.peek()
        if kind == "int":
            self.take()
            if self.peek()[0] == "/":
                self.take()
                den = self.take("int")
                return Scalar.from_rational(rat(int(value), int(den[1])))
            return Scalar.from_rational(int(value))
        if kind == "name":
            if value == "K":
                self.take()
                return K
            if value == "C":
                self.take()
                return C
            raise ParseError(f"unknown symbol {value!r}", position)
        if kind == "(":
            self.take()
            inner = self.parse_expr()
            self.take(")")
            return inner
        raise ParseError(f"expected a scalar atom, found {value!r}", position)


def parse_scalar(text: str) -> Scalar:
    parser = _ScalarParser(tokenize(text))
    value = parser.parse_expr()
    parser.take("end")
    return value
